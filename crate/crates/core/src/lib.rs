//! Certification toolkit for fixed-point and cohomology-vanishing criteria
//! on weighted link graphs.
//!
//! The pipeline: a symmetric generating set (or a raw weighted graph) comes
//! in; the toolkit verifies weight admissibility, computes the normalized
//! Laplacian spectrum and the p-Poincaré constants kappa_p of the link,
//! and turns those into certificates: fixed-point verdicts at a given
//! exponent pair (p, p*), Kazhdan-type constants, certified exponent ranges
//! for hyperbolic-type data, conformal-dimension lower bounds, and the
//! incidence-graph thresholds for triangle-type groups. A variational
//! p-Laplacian solver closes the loop by checking the induced spectral-gap
//! bound on Cayley graphs of finite quotients.
//!
//! Numerical contracts worth knowing before reading any module:
//! eigenvalues come from a symmetric dense solver with residuals checked
//! against `ZERO_EIG_TOL`; optimizers are deterministic for a fixed
//! (seed, restarts) pair; every certificate records which side of an
//! inequality each method can certify, and verdicts never promote a
//! lower-bound method into an upper bound.

pub mod certificate;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod plane;
pub mod plaplacian;
pub mod poincare;
pub mod primes;
pub mod spectral;

pub use certificate::{A2Report, A2Scan, Certificate, KappaBound, PRangeReport, ScanRow, Verdict};
pub use error::{Error, Result};
pub use graph::{AdmissibilityReport, Edge, GeneratingSetSpec, GraphStats, WeightedGraph};
pub use plaplacian::{CayleyGraph, GroupTable, QuotientBoundReport, RayleighResult};
pub use poincare::{Method, PoincareEstimate};
pub use spectral::SpectrumResult;
