//! Discrete p-Laplacian, its first positive variational eigenvalue, and
//! Cayley graphs of finite quotients.
//!
//! Convention warning, deliberately loud: the Rayleigh quotient behind
//! [`lambda1_p`] uses the ORDERED double sum over neighbor pairs, so each
//! edge contributes twice to the numerator, while the Poincaré module sums
//! unordered edges. The two meet at p = 2 through the identity
//! lambda1_p = 2 * lambda_1(normalized), which the tests assert rather than
//! silently absorb. The denominator also differs from the Poincaré one: the
//! shift is not the fixed degree-weighted mean Qf but the true minimizer
//! alpha* of sum |f - alpha|^p deg, found by [`inner_alpha`].
//!
//! The quotient bound closes the loop: on the Cayley graph of any finite
//! quotient, weighted by deg(s)/omega(E) per generator (the minimal
//! admissible rule, applied at equality), lambda_1^{(p)} is bounded below by
//! 2(1 - 2^{-1/p} kappa_p) of the link. That constant has two natural
//! readings: the direct one, and the p*-power of it bounding the
//! p*-quotient, which is what chaining the underlying inequalities actually
//! produces. [`check_quotient_bound`] evaluates both side by side and
//! asserts neither.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{close_rel, Edge, GeneratingSetSpec, WeightedGraph, WEIGHT_RTOL};

/// Iteration cap for one descent run.
const MAX_ITERS: usize = 100_000;

/// Descent stops when the quotient improves by less than this relative
/// amount over a 50-iteration window.
const STALL_RTOL: f64 = 1e-10;
const STALL_WINDOW: usize = 50;

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidP {
            p,
            requirement: "need 1 < p < infinity",
        });
    }
    Ok(())
}

/// a^{[p]} = |a|^{p-1} sign(a), the odd power kernel of the p-Laplacian.
fn signed_pow(a: f64, p: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a.abs().powf(p - 1.0) * a.signum()
    }
}

// ---------------------------------------------------------------------------
// Operator and inner minimization
// ---------------------------------------------------------------------------

/// Pointwise p-Laplacian: (Delta_p f)(x) = sum_{y ~ x} (f(x)-f(y))^{[p]} w(x,y).
pub fn apply_p_laplacian(graph: &WeightedGraph, f: &[f64], p: f64) -> Result<Vec<f64>> {
    check_p(p)?;
    let n = graph.num_vertices();
    if f.len() != n {
        return Err(Error::WrongLength {
            expected: n,
            got: f.len(),
        });
    }
    let mut out = vec![0.0; n];
    for e in graph.edges() {
        let d = signed_pow(f[e.u] - f[e.v], p) * e.w;
        out[e.u] += d;
        out[e.v] -= d; // (f(v)-f(u))^{[p]} = -(f(u)-f(v))^{[p]}
    }
    Ok(out)
}

/// The minimizer alpha* of alpha -> sum_x |f(x) - alpha|^p deg(x).
///
/// The map is strictly convex for p > 1, so its derivative is increasing
/// and vanishes exactly once in [min f, max f]; bisection drives the
/// derivative magnitude below 1e-12 of its natural scale.
pub fn inner_alpha(f: &[f64], p: f64, degrees: &[f64]) -> Result<f64> {
    check_p(p)?;
    if f.len() != degrees.len() {
        return Err(Error::WrongLength {
            expected: degrees.len(),
            got: f.len(),
        });
    }
    if f.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (mut lo, mut hi) = (f[0], f[0]);
    for &x in f {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo == hi {
        return Ok(lo); // constant f: the objective is minimized at its value
    }

    // d/d alpha sum |f - alpha|^p deg = -p sum (f - alpha)^{[p-.]} deg;
    // drop the positive factor p and flip sign so `deriv` increases.
    let deriv = |alpha: f64| -> f64 {
        -f.iter()
            .zip(degrees)
            .map(|(&x, &d)| signed_pow(x - alpha, p) * d)
            .sum::<f64>()
    };
    // Stopping scale: sum(deg) * ||f||_inf^{p-1}, the magnitude the
    // derivative naturally lives at; the returned alpha* zeroes the
    // derivative to 1e-12 of it.
    let scale: f64 = {
        let amp = lo.abs().max(hi.abs());
        degrees.iter().sum::<f64>() * amp.powf(p - 1.0)
    };

    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let d = deriv(mid);
        if d.abs() <= 1e-12 * scale {
            return Ok(mid);
        }
        if d < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

// ---------------------------------------------------------------------------
// Variational first eigenvalue
// ---------------------------------------------------------------------------

/// Outcome of the variational minimization of the ordered p-Rayleigh
/// quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighResult {
    pub p: f64,
    /// Best quotient found: an upper bound on lambda_1^{(p)}, reproduced
    /// exactly from `witness`.
    pub value: f64,
    /// Minimizing function, re-centered so its inner shift is near zero.
    pub witness: Vec<f64>,
    /// The inner minimizer for `witness`.
    pub alpha_star: f64,
    /// Iterations consumed by the winning restart.
    pub iterations: usize,
    /// Restart count actually run.
    pub restarts: usize,
    /// Diagnostic only: relative residual of the stationarity equation
    /// 2 Delta_p w = lambda (w - alpha*)^{[p]} deg. The solver is
    /// variational; this just reports how close the witness is to a true
    /// eigenfunction.
    pub residual: f64,
}

/// Ordered-sum Rayleigh quotient of one function (numerator counts each
/// edge twice), with the inner shift already minimized out. Any nonconstant
/// f gives an upper bound on lambda_1^{(p)}.
pub fn rayleigh_quotient(graph: &WeightedGraph, f: &[f64], p: f64) -> Result<f64> {
    let num: f64 = 2.0
        * graph
            .edges()
            .iter()
            .map(|e| (f[e.u] - f[e.v]).abs().powf(p) * e.w)
            .sum::<f64>();
    let alpha = inner_alpha(f, p, graph.degrees())?;
    let den: f64 = f
        .iter()
        .zip(graph.degrees())
        .map(|(&x, &d)| (x - alpha).abs().powf(p) * d)
        .sum();
    if den == 0.0 {
        return Err(Error::ConstantFunction);
    }
    Ok(num / den)
}

/// One descent run from a given start; returns (best f, iterations used).
fn descend(graph: &WeightedGraph, p: f64, mut f: Vec<f64>, iters_out: &mut usize) -> Vec<f64> {
    let n = graph.num_vertices();
    let deg = graph.degrees();
    let mut value = match rayleigh_quotient(graph, &f, p) {
        Ok(v) => v,
        Err(_) => return f,
    };
    let mut history = std::collections::VecDeque::with_capacity(STALL_WINDOW + 1);
    history.push_back(value);
    // Previous iterate and gradient, feeding the Barzilai-Borwein step.
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut last_step = 1.0f64;

    for iter in 0..MAX_ITERS {
        *iters_out = iter + 1;
        let alpha = match inner_alpha(&f, p, deg) {
            Ok(a) => a,
            Err(_) => break,
        };
        let num: f64 = 2.0
            * graph
                .edges()
                .iter()
                .map(|e| (f[e.u] - f[e.v]).abs().powf(p) * e.w)
                .sum::<f64>();
        let den: f64 = f
            .iter()
            .zip(deg)
            .map(|(&x, &d)| (x - alpha).abs().powf(p) * d)
            .sum();
        if num == 0.0 || den == 0.0 {
            break;
        }

        // Gradient of log(num) - log(den). The numerator part is the
        // p-Laplacian itself; the denominator part uses the envelope
        // theorem: alpha* is a minimizer, so d alpha*/d f contributes
        // nothing to first order.
        let lap = apply_p_laplacian(graph, &f, p).expect("validated inputs");
        let mut grad = vec![0.0; n];
        for v in 0..n {
            let g_num = 2.0 * p * lap[v] / num;
            let g_den = p * signed_pow(f[v] - alpha, p) * deg[v] / den;
            grad[v] = g_num - g_den;
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-15 {
            break;
        }

        // Barzilai-Borwein initial step from the last displacement and
        // gradient change (usable when s.y > 0 for a descent), safeguarded
        // by the backtracking below; plain halving from a unit step crawls
        // near the minimizer.
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
                if sy > 0.0 && ss > 0.0 && (ss / sy).is_finite() {
                    (ss / sy).clamp(1e-16, 1e12)
                } else {
                    (last_step * 4.0).min(1.0)
                }
            }
            None => 1.0,
        };
        prev = Some((f.clone(), grad.clone()));

        // Backtracking descent step; re-center and renormalize to keep the
        // iterate well-scaled (the quotient is invariant under cf + d).
        let mut accepted = false;
        while step > 1e-18 {
            let mut trial: Vec<f64> = f.iter().zip(&grad).map(|(&x, &g)| x - step * g).collect();
            if let Ok(a) = inner_alpha(&trial, p, deg) {
                for x in trial.iter_mut() {
                    *x -= a;
                }
            }
            let len = trial.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 0.0 {
                for x in trial.iter_mut() {
                    *x /= len;
                }
                if let Ok(trial_value) = rayleigh_quotient(graph, &trial, p) {
                    if trial_value < value {
                        f = trial;
                        value = trial_value;
                        accepted = true;
                        last_step = step;
                        break;
                    }
                }
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }

        history.push_back(value);
        if history.len() > STALL_WINDOW {
            let old = history.pop_front().expect("window nonempty");
            if (old - value) / value < STALL_RTOL {
                break;
            }
        }
    }
    f
}

/// First positive variational eigenvalue of the p-Laplacian: the infimum of
/// the ordered Rayleigh quotient over nonconstant functions, approached by
/// multi-restart gradient descent. Deterministic per (seed, restarts); the
/// result is a certified upper bound on lambda_1^{(p)} with a witness.
pub fn lambda1_p(
    graph: &WeightedGraph,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<RayleighResult> {
    check_p(p)?;
    if !graph.is_connected()? {
        return Err(Error::Disconnected);
    }
    let n = graph.num_vertices();
    let restarts = restarts.max(1);

    let runs: Vec<(f64, Vec<f64>, usize)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let stream = seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let mut start: Vec<f64>;
            loop {
                start = (0..n)
                    .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                    .collect();
                let spread = start.iter().cloned().fold(f64::NAN, f64::max)
                    - start.iter().cloned().fold(f64::NAN, f64::min);
                if spread > 1e-9 {
                    break;
                }
            }
            let mut iters = 0usize;
            let f = descend(graph, p, start, &mut iters);
            let value = rayleigh_quotient(graph, &f, p).unwrap_or(f64::INFINITY);
            (value, f, iters)
        })
        .collect();

    let mut best = 0usize;
    for (i, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = i;
        }
    }
    let (value, witness, iterations) = runs.into_iter().nth(best).expect("restarts >= 1");
    let alpha_star = inner_alpha(&witness, p, graph.degrees())?;

    // Stationarity residual, diagnostics only.
    let lap = apply_p_laplacian(graph, &witness, p)?;
    let mut res_sq = 0.0;
    let mut ref_sq = 0.0;
    for (v, &lv) in lap.iter().enumerate() {
        let lhs = 2.0 * lv;
        let rhs = value * signed_pow(witness[v] - alpha_star, p) * graph.deg(v);
        res_sq += (lhs - rhs) * (lhs - rhs);
        ref_sq += lhs * lhs;
    }
    let residual = if ref_sq > 0.0 {
        (res_sq / ref_sq).sqrt()
    } else {
        0.0
    };

    Ok(RayleighResult {
        p,
        value,
        witness,
        alpha_star,
        iterations,
        restarts,
        residual,
    })
}

// ---------------------------------------------------------------------------
// Group tables and Cayley graphs
// ---------------------------------------------------------------------------

/// A finite group given by its full multiplication table, validated on
/// construction (well-formed indices, two-sided identity, Latin square,
/// associativity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Row-major: table[a * n + b] = a * b.
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(labels: Vec<String>, table: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        if table.len() != n * n {
            return Err(Error::BadTableSize {
                expected: n * n,
                got: table.len(),
            });
        }
        for (pos, &v) in table.iter().enumerate() {
            if v >= n {
                return Err(Error::TableIndexOutOfRange {
                    row: pos / n,
                    col: pos % n,
                    value: v,
                });
            }
        }

        // Latin square: every row and column is a permutation.
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                let rb = table[a * n + b];
                let cb = table[b * n + a];
                if row_seen[rb] || col_seen[cb] {
                    return Err(Error::NotLatin(labels[a].clone()));
                }
                row_seen[rb] = true;
                col_seen[cb] = true;
            }
        }

        // Two-sided identity.
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or(Error::NoIdentity)?;

        // Associativity, the full cubic check; group orders here are small.
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(Error::NotAssociative {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }

        let inverse = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| table[a * n + b] == identity)
                    .expect("Latin row")
            })
            .collect();

        Ok(GroupTable {
            labels,
            index,
            table,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// A Cayley graph together with the generator images that built it. The
/// weight rule is the minimal admissible one, applied at
/// equality: the unordered edge {g, h} carries
/// sum_{s : images(s) = g^{-1} h} deg_link(s) / omega_E, which is
/// direction-independent because images respect the involution and link
/// degrees pair up under it.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub graph: WeightedGraph,
    /// Generator label -> group element index.
    pub generator_images: BTreeMap<String, usize>,
}

/// Builds the Cayley graph of a finite quotient under the minimal
/// admissible weight rule.
///
/// `link_degrees` are the link-graph degrees aligned with `link_spec`'s
/// element order, and `omega_e` is the link's total edge mass (twice the
/// unordered sum). Validation: every generator needs an image inside the
/// group, off the identity, compatible with the involution, with matching
/// degrees across inverse pairs; the images must generate the whole group.
pub fn cayley_graph(
    group: &GroupTable,
    images: &BTreeMap<String, usize>,
    link_spec: &GeneratingSetSpec,
    link_degrees: &[f64],
    omega_e: f64,
) -> Result<CayleyGraph> {
    let n = group.order();
    if link_degrees.len() != link_spec.len() {
        return Err(Error::WrongLength {
            expected: link_spec.len(),
            got: link_degrees.len(),
        });
    }
    debug_assert!(omega_e > 0.0 && omega_e.is_finite());

    // Per-generator validation, in element order for deterministic errors.
    let mut image_of = Vec::with_capacity(link_spec.len());
    for (s_idx, s) in link_spec.elements().iter().enumerate() {
        let &img = images
            .get(s)
            .ok_or_else(|| Error::MissingImage(s.clone()))?;
        if img >= n {
            return Err(Error::ImageOutOfRange {
                s: s.clone(),
                idx: img,
            });
        }
        if img == group.identity() {
            return Err(Error::IdentityImage(s.clone()));
        }
        image_of.push((s_idx, img));
    }
    for &(s_idx, img) in &image_of {
        let inv_idx = link_spec.inv(s_idx);
        let expected = group.inv(img);
        if image_of[inv_idx].1 != expected {
            return Err(Error::InvolutionMismatch {
                s: link_spec.elements()[s_idx].clone(),
            });
        }
        if !close_rel(link_degrees[s_idx], link_degrees[inv_idx], WEIGHT_RTOL) {
            return Err(Error::DegreeAsymmetry {
                s: link_spec.elements()[s_idx].clone(),
            });
        }
    }

    // Aggregate generator mass per group element (collisions sum).
    let mut mass = vec![0.0f64; n];
    for &(s_idx, img) in &image_of {
        mass[img] += link_degrees[s_idx] / omega_e;
    }

    // Reachability from the identity via the images.
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([group.identity()]);
    seen[group.identity()] = true;
    let mut reached = 1usize;
    while let Some(g) = queue.pop_front() {
        for &(_, img) in &image_of {
            let h = group.mul(g, img);
            if !seen[h] {
                seen[h] = true;
                reached += 1;
                queue.push_back(h);
            }
        }
    }
    if reached != n {
        return Err(Error::NotGenerating { reached, total: n });
    }

    // One unordered edge per pair {g, g*r}; the two traversal directions
    // land on the same weight because mass(r) = mass(r^{-1}).
    let mut edges = Vec::new();
    for g in 0..n {
        for (r, &w) in mass.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let h = group.mul(g, r);
            if g < h {
                edges.push(Edge { u: g, v: h, w });
            }
        }
    }
    let graph = WeightedGraph::from_indexed(group.labels().to_vec(), edges)?;

    Ok(CayleyGraph {
        graph,
        generator_images: images.clone(),
    })
}

// ---------------------------------------------------------------------------
// Quotient bound
// ---------------------------------------------------------------------------

/// Both readings of the quotient bound, evaluated on one Cayley graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientBoundReport {
    pub p: f64,
    pub pstar: f64,
    pub kappa_p_upper: f64,
    /// False when 2^{-1/p} kappa_p >= 1: the bound claims nothing and
    /// every Option below stays empty.
    pub claimed: bool,
    /// Direct reading: lambda_1^{(p)} >= 2(1 - 2^{-1/p} kappa_p).
    pub b_stated: Option<f64>,
    /// Chained reading: the p*-th power of b_stated, bounding the
    /// p*-quotient.
    pub b_derived: Option<f64>,
    pub lambda1_p: Option<RayleighResult>,
    pub lambda1_pstar: Option<RayleighResult>,
    pub stated_holds: Option<bool>,
    pub stated_margin: Option<f64>,
    pub derived_holds: Option<bool>,
    pub derived_margin: Option<f64>,
}

/// Checks the quotient bound in both its direct and chained readings.
/// Neither is assumed: the report carries each side's threshold, the
/// computed eigenvalue estimate, and the margin.
pub fn check_quotient_bound(
    kappa_p_upper: f64,
    cayley: &CayleyGraph,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<QuotientBoundReport> {
    check_p(p)?;
    if !(kappa_p_upper.is_finite() && kappa_p_upper >= 0.0) {
        return Err(Error::BadKappa {
            value: kappa_p_upper,
        });
    }
    let pstar = p / (p - 1.0);
    let condition = 2f64.powf(-1.0 / p) * kappa_p_upper;
    if condition >= 1.0 {
        return Ok(QuotientBoundReport {
            p,
            pstar,
            kappa_p_upper,
            claimed: false,
            b_stated: None,
            b_derived: None,
            lambda1_p: None,
            lambda1_pstar: None,
            stated_holds: None,
            stated_margin: None,
            derived_holds: None,
            derived_margin: None,
        });
    }

    let b_stated = 2.0 * (1.0 - condition);
    let b_derived = b_stated.powf(pstar);
    let lam_p = lambda1_p(&cayley.graph, p, restarts, seed)?;
    let lam_pstar = lambda1_p(&cayley.graph, pstar, restarts, seed)?;
    let stated_margin = lam_p.value - b_stated;
    let derived_margin = lam_pstar.value - b_derived;

    Ok(QuotientBoundReport {
        p,
        pstar,
        kappa_p_upper,
        claimed: true,
        b_stated: Some(b_stated),
        b_derived: Some(b_derived),
        stated_holds: Some(stated_margin >= 0.0),
        derived_holds: Some(derived_margin >= 0.0),
        lambda1_p: Some(lam_p),
        lambda1_pstar: Some(lam_pstar),
        stated_margin: Some(stated_margin),
        derived_margin: Some(derived_margin),
    })
}
