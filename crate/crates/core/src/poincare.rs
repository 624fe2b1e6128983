//! Poincaré constants kappa_p for general exponents.
//!
//! kappa_p is the smallest constant with ||f - Qf||_p <= kappa_p ||grad f||_p
//! over real test functions on the link graph, equivalently the supremum of
//! the Rayleigh-type ratio in [`poincare_ratio`]. Only p = 2 has an exact
//! eigensolver route, so the general-p toolkit is built from four mutually
//! checking estimators:
//!
//! * [`kappa_p_optimize`]: projected gradient ascent on the ratio, restarted
//!   from seeded random points. Produces certified lower bounds (any test
//!   function gives one) with an explicit witness; never an upper bound on
//!   its own, because the problem is nonconvex for p != 2.
//! * [`kappa_p_brute`]: exhaustive sphere mesh plus pattern-search
//!   refinement on graphs with at most 5 vertices. Independent of the
//!   gradient code on purpose; serves as the oracle the optimizer is tested
//!   against.
//! * [`kappa_p_interp_upper`]: a closed-form norm-comparison upper bound for
//!   p >= 2 on regular graphs, the only certified upper bound available at
//!   scale.
//! * [`kappa_inf_lower`]: the p = infinity lower bound max_s d(s, s^{-1})
//!   from the path metric, with the classical two-tent witness profile.
//!
//! Convention: denominators sum over unordered edges. An ordered-pair sum
//! would double every term and shrink each kappa_p by 2^{1/p}; the unordered
//! choice is pinned by the two-vertex graph, where kappa_2 = 2^{-1/2}
//! matches the eigensolver's lambda_1 = 2.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GeneratingSetSpec, WeightedGraph};
use crate::spectral;

/// Iteration cap for a single gradient-ascent or pattern-search run.
const MAX_ITERS: usize = 100_000;

/// Pattern search halves its angular step until it drops below this.
const REFINE_STEP_MIN: f64 = 1e-8;

/// Ascent stops when the cumulative relative gain over this many accepted
/// steps falls below the run tolerance.
const STALL_WINDOW: usize = 30;

/// How each estimate was produced, which fixes what it certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Exact p = 2 eigendecomposition.
    Eigen,
    /// Gradient ascent from random restarts; certified lower bound only.
    Optimize,
    /// Exhaustive mesh + refinement on a tiny graph; both sides certified.
    Brute,
    /// Norm-comparison closed form; certified upper bound only.
    Interp,
    /// Path-metric construction at p = infinity; certified lower bound.
    Path,
}

impl Method {
    /// True when `upper` in an estimate from this method is a certified
    /// upper bound rather than a placeholder.
    pub fn certifies_upper(self) -> bool {
        matches!(self, Method::Eigen | Method::Brute | Method::Interp)
    }

    /// True when `lower` is a certified lower bound (a value attained or
    /// provably not exceeding kappa_p).
    pub fn certifies_lower(self) -> bool {
        matches!(
            self,
            Method::Eigen | Method::Optimize | Method::Brute | Method::Path
        )
    }
}

/// JSON maps +infinity to null in `p` and `upper`; this round-trips it.
mod extended_real {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// A two-sided estimate of kappa_p with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoincareEstimate {
    /// Exponent; +infinity (serialized as null) for the path bound.
    #[serde(with = "extended_real")]
    pub p: f64,
    /// Certified lower bound (0 when the method provides none).
    pub lower: f64,
    /// Upper bound, +infinity (serialized as null) when the method cannot
    /// certify one.
    #[serde(with = "extended_real")]
    pub upper: f64,
    pub method: Method,
    /// Test function attaining `lower`, indexed like the graph vertices.
    /// For finite p it reproduces `lower` under [`poincare_ratio`]; for the
    /// p = infinity path bound it is the classical two-tent profile, kept
    /// for inspection rather than for reproducing the bound (see
    /// [`kappa_inf_lower`]).
    pub witness: Option<Vec<f64>>,
}

// ---------------------------------------------------------------------------
// The ratio
// ---------------------------------------------------------------------------

fn check_finite_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidP {
            p,
            requirement: "need 1 < p < infinity",
        });
    }
    Ok(())
}

/// Degree-weighted mean Qf = (1/omega(E)) sum_v f(v) deg(v).
fn weighted_mean(graph: &WeightedGraph, f: &[f64]) -> f64 {
    let deg = graph.degrees();
    let total: f64 = f.iter().zip(deg).map(|(&x, &d)| x * d).sum();
    total / graph.omega_e()
}

/// The p-Poincaré Rayleigh ratio
/// [sum_v |f(v) - Qf|^p deg(v)]^{1/p} / [sum_{{u,v}} |f(u) - f(v)|^p w(u,v)]^{1/p}.
///
/// Every nonconstant f gives a lower bound for kappa_p; the supremum over f
/// is kappa_p itself.
pub fn poincare_ratio(graph: &WeightedGraph, f: &[f64], p: f64) -> Result<f64> {
    check_finite_p(p)?;
    let n = graph.num_vertices();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if f.len() != n {
        return Err(Error::WrongLength {
            expected: n,
            got: f.len(),
        });
    }
    let q = weighted_mean(graph, f);
    let num: f64 = f
        .iter()
        .zip(graph.degrees())
        .map(|(&x, &d)| (x - q).abs().powf(p) * d)
        .sum();
    let den: f64 = graph
        .edges()
        .iter()
        .map(|e| (f[e.u] - f[e.v]).abs().powf(p) * e.w)
        .sum();
    if den == 0.0 {
        return Err(Error::ConstantFunction);
    }
    Ok((num / den).powf(1.0 / p))
}

// ---------------------------------------------------------------------------
// Gradient ascent
// ---------------------------------------------------------------------------

/// Removes the deg-direction component, restoring sum f(v) deg(v) = 0.
fn project_mean_zero(f: &mut [f64], deg: &[f64], deg_norm_sq: f64) {
    let along: f64 = f.iter().zip(deg).map(|(&x, &d)| x * d).sum();
    let c = along / deg_norm_sq;
    for (x, &d) in f.iter_mut().zip(deg) {
        *x -= c * d;
    }
}

fn norm(f: &[f64]) -> f64 {
    f.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

/// log N(f) - log D(f), the quantity the ascent climbs (ratio = exp(./p)).
fn log_objective(graph: &WeightedGraph, f: &[f64], p: f64) -> f64 {
    let q = weighted_mean(graph, f);
    let num: f64 = f
        .iter()
        .zip(graph.degrees())
        .map(|(&x, &d)| (x - q).abs().powf(p) * d)
        .sum();
    let den: f64 = graph
        .edges()
        .iter()
        .map(|e| (f[e.u] - f[e.v]).abs().powf(p) * e.w)
        .sum();
    if num == 0.0 || den == 0.0 {
        return f64::NEG_INFINITY;
    }
    num.ln() - den.ln()
}

/// |t|^{p-1} sign(t), the derivative of |t|^p / p. Smooth for p > 1.
fn signed_pow(t: f64, p: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        t.abs().powf(p - 1.0) * t.signum()
    }
}

/// One restart of projected gradient ascent on the constraint sphere
/// {sum f deg = 0, ||f|| = 1}. Returns the final point.
///
/// The gradient of log N has a mean-correction term proportional to the deg
/// vector (from Qf depending on f); that direction is exactly the normal of
/// the linear constraint, so the tangent projection annihilates it and the
/// simple per-vertex gradient suffices.
fn ascend(graph: &WeightedGraph, p: f64, mut f: Vec<f64>, tol: f64) -> Vec<f64> {
    let n = graph.num_vertices();
    let deg = graph.degrees().to_vec();
    let deg_norm_sq: f64 = deg.iter().map(|&d| d * d).sum();
    let mut obj = log_objective(graph, &f, p);
    // Previous iterate and gradient, feeding the Barzilai-Borwein step.
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut last_step = 1.0f64;
    let mut history = std::collections::VecDeque::with_capacity(STALL_WINDOW + 1);
    history.push_back(obj);

    for _ in 0..MAX_ITERS {
        let q = weighted_mean(graph, &f);
        let num: f64 = f
            .iter()
            .zip(&deg)
            .map(|(&x, &d)| (x - q).abs().powf(p) * d)
            .sum();
        let den: f64 = graph
            .edges()
            .iter()
            .map(|e| (f[e.u] - f[e.v]).abs().powf(p) * e.w)
            .sum();
        if num == 0.0 || den == 0.0 {
            break;
        }

        let mut grad = vec![0.0; n];
        for v in 0..n {
            grad[v] = p * signed_pow(f[v] - q, p) * deg[v] / num;
        }
        for e in graph.edges() {
            let g = p * signed_pow(f[e.u] - f[e.v], p) * e.w / den;
            grad[e.u] -= g;
            grad[e.v] += g;
        }
        // Tangent projection: first the linear constraint, then the sphere.
        project_mean_zero(&mut grad, &deg, deg_norm_sq);
        let radial: f64 = grad.iter().zip(&f).map(|(&g, &x)| g * x).sum();
        for (g, &x) in grad.iter_mut().zip(&f) {
            *g -= radial * x;
        }
        if norm(&grad) < 1e-15 {
            break;
        }

        // Barzilai-Borwein initial step (curvature proxy from the last
        // displacement/gradient pair; for ascent the usable sign is s.y < 0),
        // safeguarded by the backtracking below. Without it, plain halving
        // from a unit step crawls near the optimum.
        let mut step = match &prev {
            Some((pf, pg)) => {
                let mut ss = 0.0;
                let mut sy = 0.0;
                for i in 0..n {
                    let s = f[i] - pf[i];
                    let y = grad[i] - pg[i];
                    ss += s * s;
                    sy += s * y;
                }
                if sy < 0.0 && ss > 0.0 && (ss / -sy).is_finite() {
                    (ss / -sy).clamp(1e-16, 1e12)
                } else {
                    (last_step * 4.0).min(1.0)
                }
            }
            None => 1.0,
        };
        prev = Some((f.clone(), grad.clone()));

        let mut accepted = false;
        while step > 1e-18 {
            let mut trial: Vec<f64> = f.iter().zip(&grad).map(|(&x, &g)| x + step * g).collect();
            project_mean_zero(&mut trial, &deg, deg_norm_sq);
            let len = norm(&trial);
            if len > 0.0 {
                for x in trial.iter_mut() {
                    *x /= len;
                }
                let trial_obj = log_objective(graph, &trial, p);
                if trial_obj > obj {
                    f = trial;
                    obj = trial_obj;
                    accepted = true;
                    last_step = step;
                    break;
                }
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }

        // Converged when a whole window of accepted steps has moved the
        // ratio by less than the relative tolerance (log kappa = obj / p).
        history.push_back(obj);
        if history.len() > STALL_WINDOW {
            let old = history.pop_front().expect("window nonempty");
            if (obj - old) / p < tol {
                break;
            }
        }
    }
    f
}

/// Best lower bound for kappa_p from `restarts` seeded gradient-ascent runs.
///
/// Deterministic for fixed (seed, restarts): restart i uses its own stream,
/// the runs are embarrassingly parallel, and the merge is argmax by value
/// with ties to the lowest restart index. `upper` is +infinity except at
/// p = 2, where the eigensolver pins kappa_2 exactly and is reported as the
/// certified upper bound (the lower bound stays the optimizer's own value,
/// so the two routes cross-check each other).
pub fn kappa_p_optimize(
    graph: &WeightedGraph,
    p: f64,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<PoincareEstimate> {
    check_finite_p(p)?;
    if !graph.is_connected()? {
        return Err(Error::Disconnected);
    }
    let n = graph.num_vertices();
    let deg = graph.degrees().to_vec();
    let deg_norm_sq: f64 = deg.iter().map(|&d| d * d).sum();
    let restarts = restarts.max(1);

    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let stream = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let mut start;
            loop {
                start = (0..n)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect::<Vec<f64>>();
                project_mean_zero(&mut start, &deg, deg_norm_sq);
                let len = norm(&start);
                if len > 1e-9 {
                    for x in start.iter_mut() {
                        *x /= len;
                    }
                    break;
                }
            }
            let f = ascend(graph, p, start, tol);
            let value = poincare_ratio(graph, &f, p).unwrap_or(0.0);
            (value, f)
        })
        .collect();

    let mut best = 0usize;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (lower, witness) = runs.into_iter().nth(best).expect("at least one restart");

    let upper = if p == 2.0 {
        spectral::kappa2(graph)?
    } else {
        f64::INFINITY
    };
    Ok(PoincareEstimate {
        p,
        lower,
        upper,
        method: Method::Optimize,
        witness: Some(witness),
    })
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Orthonormal basis (Euclidean) of the deg-orthogonal hyperplane,
/// dimension n - 1, by Gram-Schmidt on the projected standard basis.
fn mean_zero_basis(deg: &[f64]) -> Vec<Vec<f64>> {
    let n = deg.len();
    let deg_norm_sq: f64 = deg.iter().map(|&d| d * d).sum();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        project_mean_zero(&mut v, deg, deg_norm_sq);
        for b in &basis {
            let along: f64 = v.iter().zip(b).map(|(&x, &y)| x * y).sum();
            for (x, &y) in v.iter_mut().zip(b) {
                *x -= along * y;
            }
        }
        let len = norm(&v);
        if len > 1e-10 {
            for x in v.iter_mut() {
                *x /= len;
            }
            basis.push(v);
        }
    }
    debug_assert_eq!(basis.len(), n - 1);
    basis
}

/// Hyperspherical point for the given angles (d = angles.len() + 1 coords).
fn sphere_point(angles: &[f64]) -> Vec<f64> {
    let d = angles.len() + 1;
    let mut x = vec![1.0; d];
    for (i, &theta) in angles.iter().enumerate() {
        x[i] *= theta.cos();
        let s = theta.sin();
        for xj in x.iter_mut().skip(i + 1) {
            *xj *= s;
        }
    }
    x
}

/// Exhaustive estimate of kappa_p on a graph with 2..=5 vertices.
///
/// Sweeps a mesh^{n-2}-point angular grid over the unit sphere of the
/// mean-zero subspace, then refines the best cell by coordinate pattern
/// search. `lower` is the refined ratio (attained by the witness); `upper`
/// adds the resolution slack of the search, and the two coincide for
/// two-vertex graphs where the sphere is a point pair and the value exact.
pub fn kappa_p_brute(graph: &WeightedGraph, p: f64, mesh: usize) -> Result<PoincareEstimate> {
    check_finite_p(p)?;
    let n = graph.num_vertices();
    if !(2..=5).contains(&n) {
        return Err(Error::VertexCountOutOfRange { n, min: 2, max: 5 });
    }
    if !graph.is_connected()? {
        return Err(Error::Disconnected);
    }
    let mesh = mesh.max(2);
    let basis = mean_zero_basis(graph.degrees());
    let d = basis.len();
    let eval = |angles: &[f64]| -> (f64, Vec<f64>) {
        let x = sphere_point(angles);
        let mut f = vec![0.0; n];
        for (xi, b) in x.iter().zip(&basis) {
            for (fv, &bv) in f.iter_mut().zip(b) {
                *fv += xi * bv;
            }
        }
        let value = poincare_ratio(graph, &f, p).unwrap_or(f64::NEG_INFINITY);
        (value, f)
    };

    if d == 1 {
        // One dimension: the sphere is {b, -b} and the ratio is even, so a
        // single evaluation is the exact supremum.
        let (value, f) = eval(&[]);
        return Ok(PoincareEstimate {
            p,
            lower: value,
            upper: value,
            method: Method::Brute,
            witness: Some(f),
        });
    }

    // Angle grid: polar angles in [0, pi), azimuthal in [0, 2*pi). The
    // ratio's sign-invariance makes the missing antipodes redundant.
    let mut best_angles = vec![0.0; d - 1];
    let mut best_value = f64::NEG_INFINITY;
    let mut idx = vec![0usize; d - 1];
    loop {
        let angles: Vec<f64> = idx
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let span = if k + 2 == d { 2.0 } else { 1.0 };
                span * std::f64::consts::PI * (j as f64 + 0.5) / mesh as f64
            })
            .collect();
        let (value, _) = eval(&angles);
        if value > best_value {
            best_value = value;
            best_angles = angles;
        }
        // Odometer increment over the mesh^{d-1} grid.
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < mesh {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == d - 1 {
                break;
            }
        }
        if k == d - 1 {
            break;
        }
    }

    // Pattern search from the best cell, halving the step on stall.
    let mut step = std::f64::consts::PI / mesh as f64;
    let mut iters = 0;
    while step > REFINE_STEP_MIN && iters < MAX_ITERS {
        let mut improved = false;
        for k in 0..best_angles.len() {
            for dir in [-1.0, 1.0] {
                let mut trial = best_angles.clone();
                trial[k] += dir * step;
                let (value, _) = eval(&trial);
                if value > best_value {
                    best_value = value;
                    best_angles = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
        iters += 1;
    }

    let (lower, witness) = eval(&best_angles);
    // At convergence no move of size `step` improves, so a smooth ratio sits
    // within O(step^2) of the local optimum; 1e-9 floors the slack.
    let slack = (step * step).max(1e-9);
    Ok(PoincareEstimate {
        p,
        lower,
        upper: lower * (1.0 + slack),
        method: Method::Brute,
        witness: Some(witness),
    })
}

// ---------------------------------------------------------------------------
// Closed-form upper bound
// ---------------------------------------------------------------------------

/// Norm-comparison upper bound for p >= 2 on a regular graph:
/// deg^{1/p - 1/2} * kappa_2 * (omega(E)/2)^{1/2 - 1/p}.
///
/// Chains ||f||_p <= ||f||_2 <= (#count)^{1/2-1/p} ||f||_p through the
/// exact p = 2 constant. For the incidence graph of a projective plane of
/// order q the expression collapses to (q^2+q+1)^{1/2-1/p} * kappa_2.
pub fn kappa_p_interp_upper(
    q_plus_one_degree: f64,
    omega_e: f64,
    kappa2: f64,
    p: f64,
) -> Result<f64> {
    if p < 2.0 || p.is_nan() {
        return Err(Error::InvalidP {
            p,
            requirement: "interpolation bound needs p >= 2",
        });
    }
    if !(kappa2.is_finite() && kappa2 > 0.0) {
        return Err(Error::BadKappa { value: kappa2 });
    }
    debug_assert!(q_plus_one_degree > 0.0 && omega_e > 0.0);
    let ex = 0.5 - 1.0 / p;
    Ok(q_plus_one_degree.powf(-ex) * kappa2 * (omega_e / 2.0).powf(ex))
}

// ---------------------------------------------------------------------------
// p = infinity path bound
// ---------------------------------------------------------------------------

/// Lower bound kappa_infinity >= max_s d(s, s^{-1}) in the link-graph path
/// metric, with the two-tent witness profile for the maximizing s.
///
/// The witness decays as 1 - 1/d(s, t) away from s and mirrors negatively
/// around s^{-1}, vanishing outside both radius-d/2 balls; the endpoints are
/// pinned to +1 at s and -1 at s^{-1} (the profile's limiting values, where
/// the raw formula would divide by zero). It documents the construction; the
/// bound itself is the distance, not a ratio evaluation.
pub fn kappa_inf_lower(
    spec: &GeneratingSetSpec,
    graph: &WeightedGraph,
) -> Result<PoincareEstimate> {
    for (i, s) in spec.elements().iter().enumerate() {
        if graph.label(i) != s {
            return Err(Error::VertexMismatch {
                expected: s.clone(),
                position: i,
            });
        }
    }
    if !graph.is_connected()? {
        return Err(Error::Disconnected);
    }

    let mut best: Option<(u32, usize)> = None;
    for s in 0..spec.len() {
        let d = graph.hop_distances(s)[spec.inv(s)].expect("connected graph");
        if best.is_none_or(|(bd, _)| d > bd) {
            best = Some((d, s));
        }
    }
    let (d, s) = best.ok_or(Error::EmptyGraph)?;

    let witness = if d == 0 {
        None // every generator self-inverse: the bound is vacuous
    } else {
        let inv_s = spec.inv(s);
        let from_s = graph.hop_distances(s);
        let from_inv = graph.hop_distances(inv_s);
        let half = d as f64 / 2.0;
        let f: Vec<f64> = (0..graph.num_vertices())
            .map(|t| {
                let ds = from_s[t].expect("connected") as f64;
                let di = from_inv[t].expect("connected") as f64;
                if t == s {
                    1.0
                } else if t == inv_s {
                    -1.0
                } else if ds <= half {
                    1.0 - 1.0 / ds
                } else if di <= half {
                    -1.0 + 1.0 / di
                } else {
                    0.0
                }
            })
            .collect();
        Some(f)
    };

    Ok(PoincareEstimate {
        p: f64::INFINITY,
        lower: d as f64,
        upper: f64::INFINITY,
        method: Method::Path,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_ratio_closed_forms() {
        let g = fixtures::two_vertex();
        let f = [0.0, 1.0];
        assert_relative_eq!(
            poincare_ratio(&g, &f, 2.0).unwrap(),
            2f64.powf(-0.5),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            poincare_ratio(&g, &f, 3.0).unwrap(),
            2f64.powf(-2.0 / 3.0),
            epsilon = 1e-14
        );
    }

    #[test]
    fn ratio_ignores_shift_and_scale() {
        let g = fixtures::k4();
        let f = [0.3, -1.2, 0.4, 2.0];
        let base = poincare_ratio(&g, &f, 2.5).unwrap();
        let shifted: Vec<f64> = f.iter().map(|x| x + 17.0).collect();
        let scaled: Vec<f64> = f.iter().map(|x| x * -3.25).collect();
        assert_relative_eq!(
            poincare_ratio(&g, &shifted, 2.5).unwrap(),
            base,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            poincare_ratio(&g, &scaled, 2.5).unwrap(),
            base,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ratio_rejects_bad_input() {
        let g = fixtures::triangle();
        assert_eq!(
            poincare_ratio(&g, &[1.0, 1.0, 1.0], 2.0),
            Err(Error::ConstantFunction)
        );
        assert_eq!(
            poincare_ratio(&g, &[1.0, 2.0], 2.0),
            Err(Error::WrongLength {
                expected: 3,
                got: 2
            })
        );
        assert!(matches!(
            poincare_ratio(&g, &[0.0, 1.0, 2.0], 1.0),
            Err(Error::InvalidP { .. })
        ));
    }

    #[test]
    fn optimizer_finds_the_two_point_constant() {
        let est = kappa_p_optimize(&fixtures::two_vertex(), 2.5, 8, 0, 1e-12).unwrap();
        assert_relative_eq!(est.lower, 2f64.powf(1.0 / 2.5 - 1.0), epsilon = 1e-9);
        let w = est.witness.as_ref().unwrap();
        let reproduced = poincare_ratio(&fixtures::two_vertex(), w, 2.5).unwrap();
        assert_relative_eq!(reproduced, est.lower, epsilon = 1e-12);
        assert!(est.upper.is_infinite());
    }

    #[test]
    fn optimizer_matches_the_eigensolver_at_p2() {
        for g in [fixtures::path3(), fixtures::k4(), fixtures::cycle4()] {
            let est = kappa_p_optimize(&g, 2.0, 16, 0, 1e-12).unwrap();
            let exact = crate::spectral::kappa2(&g).unwrap();
            assert_relative_eq!(est.lower, exact, epsilon = 1e-7);
            assert_relative_eq!(est.upper, exact, epsilon = 1e-14);
        }
    }

    #[test]
    fn optimizer_is_deterministic_per_seed() {
        let g = fixtures::k4();
        let a = kappa_p_optimize(&g, 3.0, 8, 7, 1e-10).unwrap();
        let b = kappa_p_optimize(&g, 3.0, 8, 7, 1e-10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn brute_is_exact_on_two_vertices() {
        for p in [1.5, 2.0, 3.0] {
            let est = kappa_p_brute(&fixtures::two_vertex(), p, 16).unwrap();
            let exact = 2f64.powf((1.0 - p) / p);
            assert_relative_eq!(est.lower, exact, epsilon = 1e-14);
            assert_eq!(est.lower, est.upper);
        }
    }

    #[test]
    fn brute_matches_kappa2_on_the_path() {
        let est = kappa_p_brute(&fixtures::path3(), 2.0, 64).unwrap();
        let exact = crate::spectral::kappa2(&fixtures::path3()).unwrap();
        assert_relative_eq!(est.lower, exact, epsilon = 1e-6);
        assert!(est.lower <= est.upper);
    }

    #[test]
    fn brute_rejects_large_graphs() {
        let g = fixtures::complete(6, 1.0);
        assert!(matches!(
            kappa_p_brute(&g, 2.0, 8),
            Err(Error::VertexCountOutOfRange { n: 6, .. })
        ));
    }

    #[test]
    fn interpolation_bound_reduces_to_kappa2_at_p2() {
        let b = kappa_p_interp_upper(3.0, 42.0, 1.375, 2.0).unwrap();
        assert_relative_eq!(b, 1.375, epsilon = 1e-15);
        assert!(matches!(
            kappa_p_interp_upper(3.0, 42.0, 1.375, 1.9),
            Err(Error::InvalidP { .. })
        ));
    }

    #[test]
    fn path_bound_reads_off_link_distances() {
        // Z/5: the link is K4 and every s sits next to its inverse.
        let spec = fixtures::z5_spec();
        let graph = crate::graph::build_link_graph(&spec, 1.0).unwrap();
        let est = kappa_inf_lower(&spec, &graph).unwrap();
        assert_eq!(est.lower, 1.0);
        assert_eq!(est.method, Method::Path);

        // Stretched pair: d(a, a^{-1}) = 3 across the path a-x-y-b.
        let spec = fixtures::stretched_pair_spec();
        let graph = crate::graph::build_link_graph(&spec, 1.0).unwrap();
        let est = kappa_inf_lower(&spec, &graph).unwrap();
        assert_eq!(est.lower, 3.0);
        let w = est.witness.unwrap();
        assert_eq!(w[0], 1.0); // f(a) pinned to +1
        assert_eq!(w[3], -1.0); // f(a^{-1}) pinned to -1
    }
}
