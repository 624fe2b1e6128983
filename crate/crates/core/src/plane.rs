//! Projective planes over finite fields and their incidence graphs.
//!
//! Points and lines of PG(2, q) are nonzero triples over GF(q) up to scale.
//! Each class is stored once, normalized so the first nonzero coordinate is
//! 1, and enumerated in the fixed order (1 : a : b), (0 : 1 : b), (0 : 0 : 1).
//! A point lies on a line exactly when the dot product of their coordinate
//! triples vanishes. The incidence graph is the bipartite graph on points
//! and lines with unit edge weights; for prime powers q it is (q+1)-regular
//! with q^2 + q + 1 vertices on each side.

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::graph::WeightedGraph;

/// Largest q for which we materialize the plane. The incidence graph has
/// 2(q^2+q+1) vertices and (q^2+q+1)(q+1) edges; beyond this, dense
/// spectral work on it is hopeless anyway.
pub const PLANE_Q_LIMIT: u64 = 128;

/// A projective plane of order q with explicit point and line coordinates.
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    field: FiniteField,
    /// Canonical representatives, first nonzero coordinate = 1.
    points: Vec<[FieldElement; 3]>,
    /// Same representatives; lines are dual to points in PG(2, q).
    lines: Vec<[FieldElement; 3]>,
}

impl ProjectivePlane {
    /// Builds PG(2, q). Fails if q is not a prime power or exceeds
    /// [`PLANE_Q_LIMIT`].
    pub fn new(q: u64) -> Result<Self> {
        if q > PLANE_Q_LIMIT {
            return Err(Error::ConstructionTooLarge {
                q: q as u128,
                limit: PLANE_Q_LIMIT as u128,
            });
        }
        let field = FiniteField::new(q)?;
        let points = enumerate_representatives(&field);
        let lines = points.clone();
        Ok(ProjectivePlane {
            field,
            points,
            lines,
        })
    }

    pub fn order(&self) -> u64 {
        self.field.order()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn points(&self) -> &[[FieldElement; 3]] {
        &self.points
    }

    pub fn lines(&self) -> &[[FieldElement; 3]] {
        &self.lines
    }

    /// True when point `p` lies on line `l`: their dot product vanishes.
    pub fn incident(&self, p: usize, l: usize) -> bool {
        let f = &self.field;
        let mut acc = f.zero();
        for i in 0..3 {
            acc = f.add(&acc, &f.mul(&self.points[p][i], &self.lines[l][i]));
        }
        f.is_zero(&acc)
    }

    /// Label of a projective triple: colon-separated integer codes, so the
    /// Fano point (1, 0, 1) over GF(2) prints as `1:0:1`.
    fn triple_label(&self, t: &[FieldElement; 3]) -> String {
        let codes: Vec<String> = t.iter().map(|c| self.field.code(c).to_string()).collect();
        codes.join(":")
    }

    /// The bipartite point-line incidence graph with unit weights.
    pub fn incidence_graph(&self) -> WeightedGraph {
        let np = self.points.len();
        let mut labels = Vec::with_capacity(np + self.lines.len());
        for p in &self.points {
            labels.push(format!("p({})", self.triple_label(p)));
        }
        for l in &self.lines {
            labels.push(format!("l({})", self.triple_label(l)));
        }
        let mut edges = Vec::new();
        for p in 0..np {
            for l in 0..self.lines.len() {
                if self.incident(p, l) {
                    edges.push(crate::graph::Edge {
                        u: p,
                        v: np + l,
                        w: 1.0,
                    });
                }
            }
        }
        WeightedGraph::from_indexed(labels, edges)
            .expect("incidence construction yields a valid graph")
    }
}

/// Convenience: the incidence graph of PG(2, q) in one call.
pub fn incidence_graph(q: u64) -> Result<WeightedGraph> {
    Ok(ProjectivePlane::new(q)?.incidence_graph())
}

/// Canonical projective representatives in the fixed enumeration order.
fn enumerate_representatives(field: &FiniteField) -> Vec<[FieldElement; 3]> {
    let q = field.order();
    let mut reps = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            reps.push([field.one(), field.element(a), field.element(b)]);
        }
    }
    for b in 0..q {
        reps.push([field.zero(), field.one(), field.element(b)]);
    }
    reps.push([field.zero(), field.zero(), field.one()]);
    reps
}
