//! Normalized Laplacian spectra and the exact p = 2 Poincaré constant.
//!
//! The Laplacian here is L = I - Deg^{-1/2} W Deg^{-1/2} with W the weighted
//! adjacency matrix. Its Rayleigh quotient over unordered edges,
//! sum_{{u,v}} |f(u)-f(v)|^2 w(u,v) / sum_v |f(v) - Qf|^2 deg(v) with Qf the
//! degree-weighted mean, is minimized over nonconstant f by the smallest
//! positive eigenvalue lambda_1, and kappa_2 = lambda_1^{-1/2}. This
//! normalization is locked in by two cross-checks: the two-vertex graph
//! (lambda_1 = 2, so kappa_2 = 2^{-1/2}, matching the direct two-point
//! Poincaré computation) and the incidence graphs of projective planes,
//! whose kappa_2 reproduces the Feit-Higman closed form.
//!
//! Everything is dense: link graphs at the scales this crate targets stay
//! below a few thousand vertices, where a full symmetric eigendecomposition
//! is cheap and gives the entire spectrum at once.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::primes::prime_power_decompose;

/// Eigenvalues below this count as zero (kernel directions); the smallest
/// one above it is lambda_1.
pub const ZERO_EIG_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Full spectrum of the normalized Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// All eigenvalues, ascending. They lie in [0, 2]; values within
    /// [`ZERO_EIG_TOL`] of that interval are clamped onto it.
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalue strictly above [`ZERO_EIG_TOL`].
    pub lambda1: f64,
    /// Number of eigenvalues at zero; equals the number of connected
    /// components.
    pub multiplicity_of_zero: usize,
    /// Largest eigenpair residual max_i ||L v_i - lambda_i v_i|| over unit
    /// eigenvectors, as a numerical-quality diagnostic.
    pub max_residual: f64,
}

/// Assembles L = I - Deg^{-1/2} W Deg^{-1/2} as a dense symmetric matrix.
pub fn normalized_laplacian(graph: &WeightedGraph) -> Result<DMatrix<f64>> {
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let deg = graph.degrees();
    if let Some(v) = deg.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex(graph.label(v).to_string()));
    }
    let inv_sqrt: Vec<f64> = deg.iter().map(|&d| d.powf(-0.5)).collect();
    let mut l = DMatrix::identity(n, n);
    for e in graph.edges() {
        let coupling = e.w * inv_sqrt[e.u] * inv_sqrt[e.v];
        l[(e.u, e.v)] = -coupling;
        l[(e.v, e.u)] = -coupling;
    }
    Ok(l)
}

/// Full eigendecomposition of the normalized Laplacian.
pub fn spectrum(graph: &WeightedGraph) -> Result<SpectrumResult> {
    let l = normalized_laplacian(graph)?;
    let n = l.nrows();
    let eigen = l.clone().symmetric_eigen();

    // Residuals against the original matrix, one eigenpair per column.
    let mut max_residual: f64 = 0.0;
    for j in 0..n {
        let v: DVector<f64> = eigen.eigenvectors.column(j).into();
        let r = &l * &v - eigen.eigenvalues[j] * &v;
        max_residual = max_residual.max(r.norm() / v.norm());
    }
    debug_assert!(
        max_residual <= ZERO_EIG_TOL,
        "eigensolver residual {max_residual}"
    );

    let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    for ev in eigenvalues.iter_mut() {
        if (-ZERO_EIG_TOL..0.0).contains(ev) {
            *ev = 0.0;
        } else if (2.0..=2.0 + ZERO_EIG_TOL).contains(ev) {
            *ev = 2.0;
        }
    }

    let multiplicity_of_zero = eigenvalues.iter().filter(|&&ev| ev <= ZERO_EIG_TOL).count();
    let lambda1 = *eigenvalues
        .iter()
        .find(|&&ev| ev > ZERO_EIG_TOL)
        .ok_or(Error::NoPositiveEigenvalue)?;

    Ok(SpectrumResult {
        eigenvalues,
        lambda1,
        multiplicity_of_zero,
        max_residual,
    })
}

// ---------------------------------------------------------------------------
// lambda_1 and kappa_2
// ---------------------------------------------------------------------------

/// Smallest positive eigenvalue of the normalized Laplacian of a connected
/// graph.
pub fn lambda1(graph: &WeightedGraph) -> Result<f64> {
    if !graph.is_connected()? {
        return Err(Error::Disconnected);
    }
    Ok(spectrum(graph)?.lambda1)
}

/// The exact p = 2 Poincaré constant kappa_2 = lambda_1^{-1/2}.
pub fn kappa2(graph: &WeightedGraph) -> Result<f64> {
    Ok(lambda1(graph)?.powf(-0.5))
}

/// Closed-form kappa_2 of the order-q projective-plane incidence graph:
/// (1 - sqrt(q)/(q+1))^{-1/2}. Valid for any prime power q, with no need to
/// materialize the graph, so q may be astronomically large.
pub fn feit_higman_kappa2(q: u128) -> Result<f64> {
    prime_power_decompose(q)?;
    let qf = q as f64;
    Ok((1.0 - qf.sqrt() / (qf + 1.0)).powf(-0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_relative_eq;

    #[test]
    fn two_vertex_spectrum_is_zero_and_two() {
        let s = spectrum(&fixtures::two_vertex()).unwrap();
        assert_eq!(s.eigenvalues.len(), 2);
        assert_relative_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(s.lambda1, 2.0, epsilon = 1e-12);
        assert_eq!(s.multiplicity_of_zero, 1);
    }

    #[test]
    fn complete_graph_lambda1_is_n_over_n_minus_1() {
        for n in [3usize, 4, 5, 7] {
            let g = fixtures::complete(n, 1.0);
            let expected = n as f64 / (n as f64 - 1.0);
            assert_relative_eq!(lambda1(&g).unwrap(), expected, epsilon = 1e-10);
        }
        assert_relative_eq!(
            kappa2(&fixtures::k4()).unwrap(),
            0.75f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn lambda1_rejects_disconnected_graphs() {
        let g = WeightedGraph::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            &[("a".into(), "b".into(), 1.0), ("c".into(), "d".into(), 1.0)],
        )
        .unwrap();
        assert_eq!(lambda1(&g), Err(Error::Disconnected));
        // The raw spectrum still works and sees two components.
        assert_eq!(spectrum(&g).unwrap().multiplicity_of_zero, 2);
    }

    #[test]
    fn laplacian_needs_positive_degrees() {
        // An edgeless one-vertex graph has degree zero.
        let g = WeightedGraph::new(vec!["a".into()], &[]).unwrap();
        assert!(matches!(
            normalized_laplacian(&g),
            Err(Error::IsolatedVertex(_))
        ));
    }

    #[test]
    fn closed_form_matches_the_eigensolver_on_small_planes() {
        for q in [2u64, 3, 4, 5] {
            let g = crate::plane::incidence_graph(q).unwrap();
            let direct = kappa2(&g).unwrap();
            let formula = feit_higman_kappa2(q as u128).unwrap();
            assert_relative_eq!(direct, formula, epsilon = 1e-9);
        }
    }

    #[test]
    fn closed_form_rejects_non_prime_powers() {
        assert!(feit_higman_kappa2(6).is_err());
        assert!(feit_higman_kappa2(1).is_err());
    }

    #[test]
    fn weight_rescaling_leaves_kappa2_alone() {
        let g = fixtures::cycle4();
        let scaled = WeightedGraph::from_indexed(
            g.labels().to_vec(),
            g.edges()
                .iter()
                .map(|e| crate::graph::Edge {
                    u: e.u,
                    v: e.v,
                    w: 17.5 * e.w,
                })
                .collect(),
        )
        .unwrap();
        let a = kappa2(&g).unwrap();
        let b = kappa2(&scaled).unwrap();
        assert!((a - b).abs() <= 1e-12 * a.max(b));
    }
}
