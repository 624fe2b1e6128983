//! Weighted graphs over labeled vertices, link graphs of a generating set,
//! and admissibility checks for the attached weights.
//!
//! Edges are unordered pairs with strictly positive weights; self-loops and
//! duplicate edges are rejected at construction. Formulas that the source
//! material states over *ordered* pairs are evaluated under the convention
//! that an unordered edge {u, v} of weight w stands for the two ordered
//! pairs (u, v) and (v, u), each of mass w. The ordered pair set is never
//! materialized; sums over it are twice the sums over stored edges.
//!
//! A [`GeneratingSetSpec`] describes a symmetric generating set S (without
//! the identity): the involution s -> s^-1 and the partial product table
//! (s, t) -> s^-1 t, recorded only where s^-1 t lands back in S. Its link
//! graph has vertex set S and an edge {s, t} exactly where the product table
//! has the pair.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for weight equalities: admissibility conditions and
/// the regularity test in [`GraphStats`].
pub const WEIGHT_RTOL: f64 = 1e-12;

/// |a - b| <= rtol * max(|a|, |b|); exact for a = b = 0.
pub(crate) fn close_rel(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs())
}

/// One undirected edge, endpoints by vertex index with u < v.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Immutable weighted graph. Vertex indices follow label declaration order,
/// so every downstream computation is deterministic for a given input.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
    deg: Vec<f64>,
}

/// Summary counts for a graph, as consumed by the threshold formulas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub num_vertices: usize,
    pub num_edges: usize,
    /// Total ordered-pair mass: exactly twice the sum of edge weights.
    pub omega_e: f64,
    pub deg_min: f64,
    pub deg_max: f64,
    /// All degrees equal within [`WEIGHT_RTOL`] relative.
    pub regular: bool,
}

impl WeightedGraph {
    /// Builds a graph from labels and label-keyed edges.
    pub fn new(labels: Vec<String>, edges: &[(String, String, f64)]) -> Result<Self> {
        let index = build_index(&labels)?;
        let indexed = edges
            .iter()
            .map(|(u, v, w)| {
                let iu = *index
                    .get(u)
                    .ok_or_else(|| Error::UnknownVertex(u.clone()))?;
                let iv = *index
                    .get(v)
                    .ok_or_else(|| Error::UnknownVertex(v.clone()))?;
                Ok(Edge {
                    u: iu,
                    v: iv,
                    w: *w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(labels, indexed)
    }

    /// Builds a graph from index-keyed edges. Endpoint order within an edge
    /// is irrelevant; edges are stored with u < v in input order.
    pub fn from_indexed(labels: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let index = build_index(&labels)?;
        let n = labels.len();
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        let mut stored = Vec::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        let mut deg = vec![0.0; n];
        for e in edges {
            if e.u >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.u)));
            }
            if e.v >= n {
                return Err(Error::UnknownVertex(format!("#{}", e.v)));
            }
            if e.u == e.v {
                return Err(Error::SelfLoop(labels[e.u].clone()));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                return Err(Error::BadWeight {
                    u: labels[e.u].clone(),
                    v: labels[e.v].clone(),
                    w: e.w,
                });
            }
            let (u, v) = if e.u < e.v { (e.u, e.v) } else { (e.v, e.u) };
            if seen.insert((u, v), ()).is_some() {
                return Err(Error::DuplicateEdge(labels[u].clone(), labels[v].clone()));
            }
            stored.push(Edge { u, v, w: e.w });
            adj[u].push((v, e.w));
            adj[v].push((u, e.w));
            deg[u] += e.w;
            deg[v] += e.w;
        }
        Ok(WeightedGraph {
            labels,
            index,
            edges: stored,
            adj,
            deg,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// deg_w(v): sum of incident edge weights.
    pub fn deg(&self, v: usize) -> f64 {
        self.deg[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.deg
    }

    /// omega(E) = sum over ordered pairs = 2 * (sum of edge weights, in
    /// stored order). This is the exact value [`GraphStats::omega_e`] carries.
    pub fn omega_e(&self) -> f64 {
        2.0 * self.edges.iter().map(|e| e.w).sum::<f64>()
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> Result<bool> {
        if self.labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let hops = self.hop_distances(0);
        Ok(hops.iter().all(|d| d.is_some()))
    }

    /// Unweighted shortest-path hop counts from `start`; `None` = unreachable.
    pub fn hop_distances(&self, start: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.labels.len()];
        let mut queue = VecDeque::new();
        dist[start] = Some(0);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(u, _) in &self.adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    pub fn stats(&self) -> GraphStats {
        let (deg_min, deg_max) = if self.deg.is_empty() {
            (0.0, 0.0)
        } else {
            self.deg
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
                    (lo.min(d), hi.max(d))
                })
        };
        GraphStats {
            num_vertices: self.labels.len(),
            num_edges: self.edges.len(),
            omega_e: self.omega_e(),
            deg_min,
            deg_max,
            regular: close_rel(deg_min, deg_max, WEIGHT_RTOL),
        }
    }
}

fn build_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateVertex(l.clone()));
        }
    }
    Ok(index)
}

/// Symmetric generating set S with inversion and partial products.
///
/// `products` maps an ordered pair (s, t) to r meaning s^-1 t = r, present
/// only when that product lies in S. The identity is excluded by schema:
/// there is no way to write it, and a key (s, s) is rejected outright.
#[derive(Debug, Clone)]
pub struct GeneratingSetSpec {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    inv: Vec<usize>,
    products: BTreeMap<(usize, usize), usize>,
}

impl GeneratingSetSpec {
    /// Validates labels, the involution, and the product table keys.
    ///
    /// The cross-pair consistency products(t, s) = inv(products(s, t)) is an
    /// invariant of well-formed input; it is enforced here and re-checked by
    /// [`build_link_graph`], which is specified to name the offending pair.
    pub fn new(
        elements: Vec<String>,
        inverse: &BTreeMap<String, String>,
        products: &[(String, String, String)],
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let index = build_index(&elements)?;
        let mut inv = vec![usize::MAX; elements.len()];
        for (i, s) in elements.iter().enumerate() {
            let image = inverse
                .get(s)
                .ok_or_else(|| Error::MissingInverse(s.clone()))?;
            inv[i] = *index
                .get(image)
                .ok_or_else(|| Error::UnknownVertex(image.clone()))?;
        }
        for (i, _) in elements.iter().enumerate() {
            if inv[inv[i]] != i {
                return Err(Error::InverseNotInvolution {
                    s: elements[i].clone(),
                    back: elements[inv[inv[i]]].clone(),
                });
            }
        }
        let mut table = BTreeMap::new();
        for (s, t, r) in products {
            let is = *index
                .get(s)
                .ok_or_else(|| Error::UnknownVertex(s.clone()))?;
            let it = *index
                .get(t)
                .ok_or_else(|| Error::UnknownVertex(t.clone()))?;
            let ir = *index
                .get(r)
                .ok_or_else(|| Error::UnknownVertex(r.clone()))?;
            if is == it {
                return Err(Error::IdentityProduct { s: s.clone() });
            }
            if let Some(prev) = table.insert((is, it), ir) {
                if prev != ir {
                    return Err(Error::DuplicateProduct {
                        s: s.clone(),
                        t: t.clone(),
                    });
                }
            }
        }
        let spec = GeneratingSetSpec {
            labels: elements,
            index,
            inv,
            products: table,
        };
        spec.check_product_consistency()?;
        Ok(spec)
    }

    fn check_product_consistency(&self) -> Result<()> {
        for (&(s, t), &r) in &self.products {
            match self.products.get(&(t, s)) {
                Some(&r2) if r2 == self.inv[r] => {}
                _ => {
                    return Err(Error::InconsistentProducts {
                        s: self.labels[s].clone(),
                        t: self.labels[t].clone(),
                    })
                }
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Index of s^-1.
    pub fn inv(&self, s: usize) -> usize {
        self.inv[s]
    }

    /// Index r with s^-1 t = r, when that product lies in S.
    pub fn product(&self, s: usize, t: usize) -> Option<usize> {
        self.products.get(&(s, t)).copied()
    }

    /// Ordered product entries ((s, t), r), ascending by key.
    pub fn products(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.products.iter().map(|(&k, &v)| (k, v))
    }
}

/// Builds the link graph of `spec`: vertices S, edge {s, t} exactly where
/// the product table has (s, t), every edge weighted `default_weight`.
pub fn build_link_graph(spec: &GeneratingSetSpec, default_weight: f64) -> Result<WeightedGraph> {
    if !(default_weight.is_finite() && default_weight > 0.0) {
        return Err(Error::BadWeight {
            u: String::new(),
            v: String::new(),
            w: default_weight,
        });
    }
    spec.check_product_consistency()?;
    let edges = spec
        .products()
        .filter(|&((s, t), _)| s < t)
        .map(|((s, t), _)| Edge {
            u: s,
            v: t,
            w: default_weight,
        })
        .collect();
    WeightedGraph::from_indexed(spec.elements().to_vec(), edges)
}

/// Which admissibility equality a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Condition (1): deg_w(s) = deg_w(s^-1).
    DegInverseSymmetry,
    /// Condition (2): deg_w(r) = mass of ordered pairs (s, t) with s^-1 t = r.
    ProductMass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub element: String,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of [`verify_admissible`]. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

/// Checks the two admissibility conditions of a weight on the link graph:
/// (1) deg_w(s) = deg_w(s^-1) for every s, and (2) for every r, deg_w(r)
/// equals the total weight of ordered pairs (s, t) with s^-1 t = r, each
/// unordered edge {s, t} feeding both (s, t) and (t, s). Equalities are
/// tested to [`WEIGHT_RTOL`] relative.
pub fn verify_admissible(
    spec: &GeneratingSetSpec,
    graph: &WeightedGraph,
) -> Result<AdmissibilityReport> {
    if graph.labels() != spec.elements() {
        let position = graph
            .labels()
            .iter()
            .zip(spec.elements())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| graph.num_vertices().min(spec.len()));
        let expected = spec
            .elements()
            .get(position)
            .cloned()
            .unwrap_or_else(|| "<end>".to_string());
        return Err(Error::VertexMismatch { expected, position });
    }
    let mut violations = Vec::new();
    for s in 0..spec.len() {
        let si = spec.inv(s);
        if s < si && !close_rel(graph.deg(s), graph.deg(si), WEIGHT_RTOL) {
            violations.push(Violation {
                condition: Condition::DegInverseSymmetry,
                element: graph.label(s).to_string(),
                lhs: graph.deg(s),
                rhs: graph.deg(si),
            });
        }
    }
    let mut mass = vec![0.0; spec.len()];
    for e in graph.edges() {
        if let Some(r) = spec.product(e.u, e.v) {
            mass[r] += e.w;
        }
        if let Some(r) = spec.product(e.v, e.u) {
            mass[r] += e.w;
        }
    }
    for (r, &forced) in mass.iter().enumerate() {
        if !close_rel(graph.deg(r), forced, WEIGHT_RTOL) {
            violations.push(Violation {
                condition: Condition::ProductMass,
                element: graph.label(r).to_string(),
                lhs: graph.deg(r),
                rhs: forced,
            });
        }
    }
    Ok(AdmissibilityReport {
        admissible: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_malformed_edges() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let dup = WeightedGraph::new(
            labels.clone(),
            &[("a".into(), "b".into(), 1.0), ("b".into(), "a".into(), 2.0)],
        );
        assert!(matches!(dup, Err(Error::DuplicateEdge(_, _))));
        let loopy = WeightedGraph::new(labels.clone(), &[("a".into(), "a".into(), 1.0)]);
        assert!(matches!(loopy, Err(Error::SelfLoop(_))));
        let neg = WeightedGraph::new(labels.clone(), &[("a".into(), "b".into(), -1.0)]);
        assert!(matches!(neg, Err(Error::BadWeight { .. })));
        let ghost = WeightedGraph::new(labels, &[("a".into(), "c".into(), 1.0)]);
        assert!(matches!(ghost, Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn degree_sum_matches_omega_e() {
        let g = fixtures::k4();
        assert_eq!(g.omega_e(), 12.0);
        let deg_sum: f64 = g.degrees().iter().sum();
        assert!(close_rel(deg_sum, g.omega_e(), WEIGHT_RTOL));
    }

    #[test]
    fn stats_match_counts() {
        let g = fixtures::k4();
        let s = g.stats();
        assert_eq!(
            (
                s.num_vertices,
                s.num_edges,
                s.omega_e,
                s.deg_min,
                s.deg_max,
                s.regular
            ),
            (4, 6, 12.0, 3.0, 3.0, true)
        );
    }

    #[test]
    fn stats_flag_irregular_weights() {
        // K4 with one reweighted edge: degrees split into 4 and 3.
        let mut edges = Vec::new();
        let labels: Vec<String> = (1..=4).map(|i| i.to_string()).collect();
        for u in 0..4usize {
            for v in (u + 1)..4 {
                let w = if (u, v) == (0, 1) { 2.0 } else { 1.0 };
                edges.push((labels[u].clone(), labels[v].clone(), w));
            }
        }
        let g = WeightedGraph::new(labels, &edges).unwrap();
        let s = g.stats();
        assert!(!s.regular);
        assert_eq!((s.deg_min, s.deg_max), (3.0, 4.0));
    }

    #[test]
    fn connectivity() {
        assert!(fixtures::k4().is_connected().unwrap());
        assert!(!fixtures::free_group_link().is_connected().unwrap());
        let empty = WeightedGraph::new(Vec::new(), &[]).unwrap();
        assert!(matches!(empty.is_connected(), Err(Error::EmptyGraph)));
    }

    #[test]
    fn z3_link_is_single_edge() {
        let spec = fixtures::z3_spec();
        let g = build_link_graph(&spec, 1.0).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.labels(), ["1", "2"]);
    }

    #[test]
    fn z5_link_is_k4() {
        let g = build_link_graph(&fixtures::z5_spec(), 1.0).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.edges().len(), 6);
        assert!(g.degrees().iter().all(|&d| d == 3.0));
    }

    #[test]
    fn free_group_link_has_no_edges() {
        let g = fixtures::free_group_link();
        assert_eq!(g.num_vertices(), 4);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn link_graph_rejects_inconsistent_products() {
        // (1,2) present without the mirrored (2,1).
        let mut inverse = BTreeMap::new();
        inverse.insert("1".to_string(), "2".to_string());
        inverse.insert("2".to_string(), "1".to_string());
        let bad = GeneratingSetSpec::new(
            vec!["1".into(), "2".into()],
            &inverse,
            &[("1".into(), "2".into(), "1".into())],
        );
        assert!(matches!(bad, Err(Error::InconsistentProducts { .. })));
    }

    #[test]
    fn spec_rejects_identity_pairs_and_bad_involution() {
        let mut inverse = BTreeMap::new();
        inverse.insert("1".to_string(), "2".to_string());
        inverse.insert("2".to_string(), "1".to_string());
        let id_pair = GeneratingSetSpec::new(
            vec!["1".into(), "2".into()],
            &inverse,
            &[("1".into(), "1".into(), "2".into())],
        );
        assert!(matches!(id_pair, Err(Error::IdentityProduct { .. })));

        let mut broken = BTreeMap::new();
        broken.insert("1".to_string(), "2".to_string());
        broken.insert("2".to_string(), "2".to_string());
        let bad_inv = GeneratingSetSpec::new(vec!["1".into(), "2".into()], &broken, &[]);
        assert!(matches!(bad_inv, Err(Error::InverseNotInvolution { .. })));
    }

    #[test]
    fn z5_uniform_weight_is_admissible() {
        let spec = fixtures::z5_spec();
        let g = build_link_graph(&spec, 1.0).unwrap();
        let report = verify_admissible(&spec, &g).unwrap();
        assert!(report.admissible, "violations: {:?}", report.violations);
    }

    #[test]
    fn z5_single_reweighted_edge_breaks_symmetry() {
        let spec = fixtures::z5_spec();
        let labels: Vec<String> = spec.elements().to_vec();
        let mut edges = Vec::new();
        for ((s, t), _) in spec.products() {
            if s < t {
                let w = if (s, t) == (0, 1) { 2.0 } else { 1.0 };
                edges.push((labels[s].clone(), labels[t].clone(), w));
            }
        }
        let g = WeightedGraph::new(labels, &edges).unwrap();
        let report = verify_admissible(&spec, &g).unwrap();
        assert!(!report.admissible);
        // deg(1) = 4 vs deg(4) = 3 breaks condition (1).
        let v = report
            .violations
            .iter()
            .find(|v| v.condition == Condition::DegInverseSymmetry && v.element == "1")
            .expect("degree-symmetry violation at element 1");
        assert_eq!((v.lhs, v.rhs), (4.0, 3.0));
    }

    #[test]
    fn z3_two_vertex_graph_is_admissible() {
        let spec = fixtures::z3_spec();
        let g = build_link_graph(&spec, 1.0).unwrap();
        let report = verify_admissible(&spec, &g).unwrap();
        assert!(report.admissible);
    }

    #[test]
    fn admissibility_requires_matching_vertices() {
        let spec = fixtures::z3_spec();
        let other = fixtures::k4();
        assert!(matches!(
            verify_admissible(&spec, &other),
            Err(Error::VertexMismatch { .. })
        ));
    }
}
