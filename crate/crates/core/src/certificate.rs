//! Certification thresholds: fixed-point certificates, Kazhdan-type
//! constants, admissible p-ranges, and the derived geometric thresholds.
//!
//! The central criterion: if both 2^{-1/p} kappa_p and 2^{-1/p*} kappa_{p*}
//! are below 1 (p* the dual exponent p/(p-1)), every affine isometric action
//! of the group on the corresponding L_p space has a fixed point and the
//! first cohomology vanishes. Everything here evaluates that inequality and
//! its quantitative consequences from kappa estimates and graph statistics.
//!
//! Soundness is directional and enforced through provenance tags: a PASS
//! needs certified *upper* bounds on both kappa inputs (eigen, interp, or
//! brute), while an obstruction needs certified *lower* bounds. An optimizer
//! value alone can therefore never certify a pass, no matter how small.
//! Condition values within [`VERDICT_MARGIN`] of 1 are deliberately
//! inconclusive: plain f64 evaluation cannot support a verdict that close to
//! the boundary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, SQRT_2};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::poincare::Method;
use crate::primes::{prime_power_decompose, prime_powers_up_to};
use crate::spectral;

/// Half-width of the inconclusive band around condition value 1.
pub const VERDICT_MARGIN: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Fixed-point certificates
// ---------------------------------------------------------------------------

/// A one-sided kappa estimate with the method that produced it; the method
/// decides whether the value may serve as an upper bound, a lower bound, or
/// both (see [`Method::certifies_upper`] / [`Method::certifies_lower`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaBound {
    pub value: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Both conditions certified below 1: fixed points exist, H^1 vanishes.
    Pass,
    /// A certified lower bound already puts a condition at or above 1.
    Fail,
    /// Bounds point the wrong way, or a value sits on the boundary band.
    Inconclusive,
}

/// Outcome of the two-sided spectral criterion at one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: f64,
    /// Dual exponent p/(p-1).
    pub pstar: f64,
    pub kappa_p: KappaBound,
    pub kappa_pstar: KappaBound,
    /// (2^{-1/p} kappa_p, 2^{-1/p*} kappa_{p*}).
    pub condition_values: (f64, f64),
    pub verdict: Verdict,
}

#[derive(PartialEq)]
enum Side {
    Below,
    Near,
    Above,
}

fn classify(c: f64) -> Side {
    if (c - 1.0).abs() <= VERDICT_MARGIN {
        Side::Near
    } else if c < 1.0 {
        Side::Below
    } else {
        Side::Above
    }
}

fn check_kappa(value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::BadKappa { value });
    }
    Ok(())
}

fn dual_exponent(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidP {
            p,
            requirement: "need 1 < p < infinity",
        });
    }
    Ok(p / (p - 1.0))
}

/// Evaluates the fixed-point criterion at exponent p from a kappa_p estimate
/// and a kappa_{p*} estimate.
///
/// The verdict is conservative in both directions: Pass only from certified
/// upper bounds with both condition values below the margin band, Fail only
/// when a certified lower bound already forces a condition value above it.
/// Everything else, including boundary-band values, is Inconclusive.
pub fn certify_fixed_point(
    kappa_p: KappaBound,
    kappa_pstar: KappaBound,
    p: f64,
) -> Result<Certificate> {
    let pstar = dual_exponent(p)?;
    check_kappa(kappa_p.value)?;
    check_kappa(kappa_pstar.value)?;

    let cond_p = 2f64.powf(-1.0 / p) * kappa_p.value;
    let cond_pstar = 2f64.powf(-1.0 / pstar) * kappa_pstar.value;
    let (side_p, side_pstar) = (classify(cond_p), classify(cond_pstar));

    let both_upper = kappa_p.method.certifies_upper() && kappa_pstar.method.certifies_upper();
    let lower_breach = (side_p == Side::Above && kappa_p.method.certifies_lower())
        || (side_pstar == Side::Above && kappa_pstar.method.certifies_lower());

    let verdict = if both_upper && side_p == Side::Below && side_pstar == Side::Below {
        Verdict::Pass
    } else if lower_breach {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };

    Ok(Certificate {
        p,
        pstar,
        kappa_p,
        kappa_pstar,
        condition_values: (cond_p, cond_pstar),
        verdict,
    })
}

/// Kazhdan-type displacement constant 2(1 - 2^{-1/p*} kappa_{p*}).
///
/// Positive values certify a uniform displacement gap for isometric
/// representations; values at or below zero simply mean no certificate
/// (they are returned, not treated as errors).
pub fn kazhdan_constant(kappa_pstar_upper: f64, pstar: f64) -> Result<f64> {
    if !(pstar > 1.0 && pstar.is_finite()) {
        return Err(Error::InvalidP {
            p: pstar,
            requirement: "dual exponent must satisfy 1 < p* < infinity",
        });
    }
    check_kappa(kappa_pstar_upper)?;
    Ok(2.0 * (1.0 - 2f64.powf(-1.0 / pstar) * kappa_pstar_upper))
}

/// True when a certified lower bound already meets the 2^{1/p} threshold on
/// either side, proving the fixed-point route blocked at this exponent.
/// Upper-bound-only inputs (interp) never fire the obstruction.
pub fn obstruction_check(
    kappa_p_lower: KappaBound,
    kappa_pstar_lower: KappaBound,
    p: f64,
) -> Result<bool> {
    let pstar = dual_exponent(p)?;
    check_kappa(kappa_p_lower.value)?;
    check_kappa(kappa_pstar_lower.value)?;
    let fires = |b: KappaBound, e: f64| b.method.certifies_lower() && b.value >= 2f64.powf(1.0 / e);
    Ok(fires(kappa_p_lower, p) || fires(kappa_pstar_lower, pstar))
}

// ---------------------------------------------------------------------------
// Incidence-graph p-range closed forms
// ---------------------------------------------------------------------------

/// Natural logs of the incidence-graph quantities for order q, computed in
/// f64 so that q may exceed integer-squaring range: n = q^2+q+1 points (and
/// as many lines), degree q+1, n(q+1) edges, 2n vertices.
fn incidence_logs(q: u128) -> (f64, f64, f64, f64) {
    let qf = q as f64;
    let ln_n = (qf * qf + qf + 1.0).ln();
    let ln_deg = (qf + 1.0).ln();
    let ln_edges = ln_n + ln_deg;
    let ln_vertices = LN_2 + ln_n;
    (ln_n, ln_deg, ln_edges, ln_vertices)
}

/// Largest admissible exponent for the group acting on the order-q building:
/// [ln(q^2+q+1) + ln(q+1)] / [half ln(2(q^2+q+1)(q+1)) - ln 2 - ln sqrt(1 - sqrt(q)/(q+1))].
///
/// The range 2 <= p < a2_p_max(q) is nonempty for every prime power (the
/// value always exceeds 2), peaks at q = 13 with roughly 2.106, and decays
/// to 2 from above as q grows.
pub fn a2_p_max(q: u128) -> Result<f64> {
    prime_power_decompose(q)?;
    let (ln_n, ln_deg, _, _) = incidence_logs(q);
    let qf = q as f64;
    let x = qf.sqrt() / (qf + 1.0);
    let num = ln_n + ln_deg;
    let den = 0.5 * (LN_2 + ln_n + ln_deg) - LN_2 - 0.5 * (-x).ln_1p();
    Ok(num / den)
}

/// Critical Hölder exponent for circle actions: the reciprocal arrangement
/// of the [`a2_p_max`] quotient, evaluated on its own terms so the product
/// identity `circle_alpha_threshold(q) * a2_p_max(q) = 1` is a genuine
/// cross-check.
pub fn circle_alpha_threshold(q: u128) -> Result<f64> {
    prime_power_decompose(q)?;
    let (ln_n, ln_deg, _, _) = incidence_logs(q);
    let qf = q as f64;
    let x = qf.sqrt() / (qf + 1.0);
    let num = 0.5 * (LN_2 + ln_n + ln_deg) - LN_2 - 0.5 * (-x).ln_1p();
    Ok(num / (ln_n + ln_deg))
}

/// Operator-norm threshold sqrt(2)/kappa_2 below which uniformly bounded
/// representations still have vanishing first cohomology.
pub fn ub_rep_threshold(kappa2: f64) -> Result<f64> {
    if !(kappa2.is_finite() && kappa2 > 0.0) {
        return Err(Error::BadKappa { value: kappa2 });
    }
    Ok(SQRT_2 / kappa2)
}

/// The same threshold from the order-q closed form, sqrt(2(1 - sqrt(q)/(q+1))).
pub fn a2_ub_rep_threshold(q: u128) -> Result<f64> {
    prime_power_decompose(q)?;
    let qf = q as f64;
    Ok((2.0 * (1.0 - qf.sqrt() / (qf + 1.0))).sqrt())
}

// ---------------------------------------------------------------------------
// Admissible p-ranges from graph statistics
// ---------------------------------------------------------------------------

/// Branch values and the admissible exponent range they cut out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PRangeReport {
    /// What the statistics describe (graph name, "incidence-q13", ...).
    pub id: Option<String>,
    /// Primal branch threshold.
    pub p0: f64,
    /// Dual branch threshold (a bound on p*, not on p).
    pub pbar0: f64,
    /// The dual branch translated to the p side: pbar0/(pbar0 - 1).
    pub pbar0_star: f64,
    /// min(p0, pbar0_star); the certified range is 2 <= p < p_max.
    pub p_max: f64,
    /// True when the closed forms were evaluated inside their validity
    /// regime (each branch's numerator and denominator carrying the signs
    /// the derivation assumes). Outside it the raw values are reported but
    /// mean nothing; the two-vertex graph, for instance, yields p0 = -2.
    pub regime: bool,
    /// regime AND kappa_2 < sqrt(2): the range is actually certified.
    pub certified: bool,
    /// Set when the conservative min/max-degree variant produced the
    /// numbers for an irregular graph; that substitution is strictly safer
    /// than the regular-graph closed forms but never exact.
    pub irregular_variant: bool,
}

/// Shared core: branch formulas from logs. `ln_deg_hi` feeds numerators,
/// `ln_deg_lo` denominators; a regular graph passes the same value twice,
/// and the conservative irregular variant passes max and min degree, which
/// shrinks both branches (smaller p0, larger pbar0, hence smaller p_max).
fn p_range_core(
    ln_deg_hi: f64,
    ln_deg_lo: f64,
    ln_edges: f64,
    ln_vertices: f64,
    kappa2: f64,
) -> (f64, f64, f64, f64, bool) {
    let ln_k = kappa2.ln();

    let p0_num = ln_deg_hi - LN_2 - ln_edges;
    let p0_den = 0.5 * (ln_deg_lo - ln_edges) - ln_k;
    let p0 = p0_num / p0_den;

    let pb_num = ln_vertices + ln_deg_hi - LN_2;
    let pb_den = 0.5 * (ln_vertices + ln_deg_lo) - ln_k;
    let pbar0 = pb_num / pb_den;
    let pbar0_star = pbar0 / (pbar0 - 1.0);

    let regime = p0_num < 0.0 && p0_den < 0.0 && pb_num > 0.0 && pb_den > 0.0 && pbar0 > 1.0;
    let p_max = p0.min(pbar0_star);
    (p0, pbar0, pbar0_star, p_max, regime)
}

/// Admissible p-range from the statistics of a regular link graph:
/// p0 = [ln deg - ln(2 #E)] / [half ln(deg/#E) - ln kappa_2] and
/// pbar0 = [ln(#V deg) - ln 2] / [half ln(#V deg) - ln kappa_2], with
/// p_max = min(p0, pbar0_star). On incidence-graph statistics p_max agrees
/// with [`a2_p_max`] (the two derivations collapse to the same expression).
pub fn hyperbolic_p_bounds(
    deg: f64,
    num_edges: usize,
    num_vertices: usize,
    kappa2: f64,
) -> Result<PRangeReport> {
    if !(kappa2.is_finite() && kappa2 > 0.0) {
        return Err(Error::BadKappa { value: kappa2 });
    }
    debug_assert!(deg > 0.0 && num_edges >= 1 && num_vertices >= 2);
    let ln_deg = deg.ln();
    let (p0, pbar0, pbar0_star, p_max, regime) = p_range_core(
        ln_deg,
        ln_deg,
        (num_edges as f64).ln(),
        (num_vertices as f64).ln(),
        kappa2,
    );
    Ok(PRangeReport {
        id: None,
        p0,
        pbar0,
        pbar0_star,
        p_max,
        regime,
        certified: regime && kappa2 < SQRT_2,
        irregular_variant: false,
    })
}

/// Conservative variant for irregular graphs: max degree in numerators, min
/// degree in denominators. Sound by the same interpolation argument, but an
/// extension beyond the regular-graph closed forms, hence the flag.
pub fn hyperbolic_p_bounds_irregular(
    deg_min: f64,
    deg_max: f64,
    num_edges: usize,
    num_vertices: usize,
    kappa2: f64,
) -> Result<PRangeReport> {
    if !(kappa2.is_finite() && kappa2 > 0.0) {
        return Err(Error::BadKappa { value: kappa2 });
    }
    debug_assert!(deg_min > 0.0 && deg_max >= deg_min && num_edges >= 1 && num_vertices >= 2);
    let (p0, pbar0, pbar0_star, p_max, regime) = p_range_core(
        deg_max.ln(),
        deg_min.ln(),
        (num_edges as f64).ln(),
        (num_vertices as f64).ln(),
        kappa2,
    );
    Ok(PRangeReport {
        id: None,
        p0,
        pbar0,
        pbar0_star,
        p_max,
        regime,
        certified: regime && kappa2 < SQRT_2,
        irregular_variant: true,
    })
}

/// Graph-level entry: computes stats and kappa_2, then dispatches. Regular
/// graphs use the exact closed forms; irregular ones are refused unless the
/// caller opts into the conservative variant via explicit degree bounds.
pub fn hyperbolic_p_bounds_for_graph(
    graph: &WeightedGraph,
    degree_bounds: Option<(f64, f64)>,
) -> Result<PRangeReport> {
    let stats = graph.stats();
    let kappa2 = spectral::kappa2(graph)?;
    match degree_bounds {
        Some((lo, hi)) => {
            hyperbolic_p_bounds_irregular(lo, hi, stats.num_edges, stats.num_vertices, kappa2)
        }
        None if stats.regular => {
            hyperbolic_p_bounds(stats.deg_min, stats.num_edges, stats.num_vertices, kappa2)
        }
        None => Err(Error::NotRegular {
            deg_min: stats.deg_min,
            deg_max: stats.deg_max,
        }),
    }
}

/// Conformal-dimension lower bound: the certified p_max, or an error when
/// the report carries no certified range.
pub fn confdim_lower_bound(report: &PRangeReport) -> Result<f64> {
    if !report.certified {
        return Err(Error::NoCertifiedRange);
    }
    Ok(report.p_max)
}

// ---------------------------------------------------------------------------
// Order-q summary reports
// ---------------------------------------------------------------------------

/// Every threshold the closed forms yield for one building order q.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A2Report {
    pub q: u128,
    /// Closed-form kappa_2 of the order-q incidence graph.
    pub kappa2: f64,
    /// Largest admissible exponent; equals bounds.p_max.
    pub p_max: f64,
    /// Critical circle-action Hölder exponent, 1/p_max.
    pub alpha_threshold: f64,
    /// Uniformly-bounded-representation norm threshold sqrt(2)/kappa_2.
    pub rep_norm_threshold: f64,
    /// Branch values from the incidence statistics.
    pub bounds: PRangeReport,
}

/// Assembles the full threshold report for order q.
pub fn a2_report(q: u128) -> Result<A2Report> {
    let kappa2 = spectral::feit_higman_kappa2(q)?;
    let (_, ln_deg, ln_edges, ln_vertices) = incidence_logs(q);
    let (p0, pbar0, pbar0_star, p_max, regime) =
        p_range_core(ln_deg, ln_deg, ln_edges, ln_vertices, kappa2);
    let bounds = PRangeReport {
        id: Some(format!("incidence-q{q}")),
        p0,
        pbar0,
        pbar0_star,
        p_max,
        regime,
        certified: regime && kappa2 < SQRT_2,
        irregular_variant: false,
    };
    Ok(A2Report {
        q,
        kappa2,
        p_max: a2_p_max(q)?,
        alpha_threshold: circle_alpha_threshold(q)?,
        rep_norm_threshold: a2_ub_rep_threshold(q)?,
        bounds,
    })
}

/// One row of a q-scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub q: u64,
    pub p_max: f64,
}

/// p_max over all prime powers up to q_max, with the argmax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A2Scan {
    pub rows: Vec<ScanRow>,
    pub argmax_q: u64,
    pub max_p: f64,
}

/// Evaluates a2_p_max across every prime power q <= q_max. Rows come back
/// in ascending q; the argmax tie-breaks to the smallest q.
pub fn scan_a2(q_max: u64) -> Result<A2Scan> {
    let rows: Vec<ScanRow> = prime_powers_up_to(q_max)
        .into_par_iter()
        .map(|q| {
            let p_max = a2_p_max(q as u128).expect("enumerated q is a prime power");
            ScanRow { q, p_max }
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::QTooSmall { q: q_max as u128 });
    }
    let mut best = 0usize;
    for (i, row) in rows.iter().enumerate() {
        if row.p_max > rows[best].p_max {
            best = i;
        }
    }
    Ok(A2Scan {
        argmax_q: rows[best].q,
        max_p: rows[best].p_max,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eigen(value: f64) -> KappaBound {
        KappaBound {
            value,
            method: Method::Eigen,
        }
    }

    #[test]
    fn certificates_follow_the_condition_values() {
        let pass = certify_fixed_point(eigen(0.9), eigen(0.9), 2.0).unwrap();
        assert_eq!(pass.verdict, Verdict::Pass);
        assert_relative_eq!(pass.condition_values.0, 0.9 / SQRT_2, epsilon = 1e-15);

        let fail = certify_fixed_point(eigen(1.5), eigen(1.0), 2.0).unwrap();
        assert_eq!(fail.verdict, Verdict::Fail);

        // Fano at p = 2: kappa_2 = (1 - sqrt(2)/3)^{-1/2}.
        let k = (1.0 - 2f64.sqrt() / 3.0).powf(-0.5);
        let cert = certify_fixed_point(eigen(k), eigen(k), 2.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_relative_eq!(cert.condition_values.0, 0.972575398734, epsilon = 1e-10);
    }

    #[test]
    fn pass_needs_certified_upper_bounds() {
        let opt = KappaBound {
            value: 0.9,
            method: Method::Optimize,
        };
        let cert = certify_fixed_point(opt, eigen(0.9), 2.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        // ... but a certified lower bound above threshold still fails.
        let big = KappaBound {
            value: 1.5,
            method: Method::Optimize,
        };
        assert_eq!(
            certify_fixed_point(big, eigen(0.9), 2.0).unwrap().verdict,
            Verdict::Fail
        );
        // An interp upper bound above threshold proves nothing.
        let interp = KappaBound {
            value: 1.5,
            method: Method::Interp,
        };
        assert_eq!(
            certify_fixed_point(interp, eigen(0.9), 2.0)
                .unwrap()
                .verdict,
            Verdict::Inconclusive
        );
    }

    #[test]
    fn boundary_band_is_inconclusive() {
        let at_boundary = eigen(SQRT_2 * (1.0 + 1e-12));
        let cert = certify_fixed_point(at_boundary, eigen(0.5), 2.0).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn kazhdan_constant_closed_forms() {
        let fano_k2 = (1.0 - 2f64.sqrt() / 3.0).powf(-0.5);
        assert_relative_eq!(
            kazhdan_constant(fano_k2, 2.0).unwrap(),
            0.054849202532,
            epsilon = 1e-10
        );
        assert_relative_eq!(kazhdan_constant(SQRT_2, 2.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(
            kazhdan_constant(2f64.powf(-0.5), 2.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn a2_threshold_values() {
        assert_relative_eq!(a2_p_max(13).unwrap(), 2.10609206957, epsilon = 1e-10);
        assert_relative_eq!(a2_p_max(2).unwrap(), 2.03721450665, epsilon = 1e-10);
        assert_relative_eq!(a2_p_max(3).unwrap(), 2.0657, epsilon = 1e-4);
        assert!(matches!(a2_p_max(6), Err(Error::NotPrimePower { .. })));
    }

    #[test]
    fn fano_branch_values() {
        let k2 = (1.0 - 2f64.sqrt() / 3.0).powf(-0.5);
        let r = hyperbolic_p_bounds(3.0, 21, 14, k2).unwrap();
        assert_relative_eq!(r.p0, 2.04305523545, epsilon = 1e-10);
        assert_relative_eq!(r.pbar0, 1.96412072294, epsilon = 1e-10);
        assert_relative_eq!(r.pbar0_star, 2.03721450665, epsilon = 1e-10);
        assert!(r.certified && r.regime && !r.irregular_variant);
        assert_relative_eq!(confdim_lower_bound(&r).unwrap(), r.p_max, epsilon = 0.0);
    }

    #[test]
    fn branch_formulas_match_the_direct_closed_form() {
        for q in [2u128, 3, 5, 13] {
            let k2 = spectral::feit_higman_kappa2(q).unwrap();
            let n = (q * q + q + 1) as usize;
            let r = hyperbolic_p_bounds((q + 1) as f64, n * (q + 1) as usize, 2 * n, k2).unwrap();
            let direct = a2_p_max(q).unwrap();
            assert_relative_eq!(r.p_max, direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn out_of_regime_stats_are_flagged_not_certified() {
        // Two-vertex statistics: the raw primal branch evaluates to -2.
        let r = hyperbolic_p_bounds(1.0, 1, 2, 2f64.powf(-0.5)).unwrap();
        assert!(!r.regime && !r.certified);
        assert_relative_eq!(r.p0, -2.0, epsilon = 1e-12);
        assert_eq!(confdim_lower_bound(&r), Err(Error::NoCertifiedRange));
    }

    #[test]
    fn kappa2_of_one_gives_the_reference_branch_value() {
        let r = hyperbolic_p_bounds(3.0, 21, 14, 1.0).unwrap();
        assert_relative_eq!(r.p0, 2.712414374, epsilon = 1e-9);
    }

    #[test]
    fn representation_norm_thresholds_agree() {
        let fano_k2 = (1.0 - 2f64.sqrt() / 3.0).powf(-0.5);
        let via_kappa = ub_rep_threshold(fano_k2).unwrap();
        let via_q = a2_ub_rep_threshold(2).unwrap();
        assert_relative_eq!(via_kappa, 1.028197917921, epsilon = 1e-10);
        assert_relative_eq!(via_kappa, via_q, epsilon = 1e-9);
        assert_relative_eq!(ub_rep_threshold(1.0).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_relative_eq!(ub_rep_threshold(SQRT_2).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn circle_threshold_is_the_reciprocal_exponent() {
        assert_relative_eq!(
            circle_alpha_threshold(2).unwrap(),
            0.490866325924,
            epsilon = 1e-10
        );
        assert_relative_eq!(
            circle_alpha_threshold(13).unwrap(),
            0.474813050410,
            epsilon = 1e-10
        );
        for q in [2u128, 3, 4, 5, 7, 8, 9, 11, 13] {
            let product = circle_alpha_threshold(q).unwrap() * a2_p_max(q).unwrap();
            assert_relative_eq!(product, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn obstruction_needs_certified_lower_bounds() {
        let low = eigen(1.0);
        let high = eigen(1.5);
        assert!(obstruction_check(high, low, 2.0).unwrap());
        assert!(!obstruction_check(low, low, 2.0).unwrap());
        let fano = eigen(1.37542931932);
        assert!(!obstruction_check(fano, fano, 2.0).unwrap());
        // Interp provides only upper bounds; it can never fire.
        let interp_high = KappaBound {
            value: 1.5,
            method: Method::Interp,
        };
        assert!(!obstruction_check(interp_high, interp_high, 2.0).unwrap());
    }

    #[test]
    fn scan_locates_the_peak() {
        let scan = scan_a2(100).unwrap();
        assert_eq!(scan.argmax_q, 13);
        assert_relative_eq!(scan.max_p, 2.10609206957, epsilon = 1e-10);
        assert!(scan.rows.windows(2).all(|w| w[0].q < w[1].q));
    }

    #[test]
    fn report_collects_consistent_thresholds() {
        let r = a2_report(13).unwrap();
        assert_relative_eq!(r.p_max, r.bounds.p_max, epsilon = 1e-9);
        let exact = (1.0 - 13f64.sqrt() / 14.0).powf(-0.5);
        assert_relative_eq!(r.kappa2, exact, epsilon = 1e-12);
        assert_relative_eq!(r.kappa2, 1.160548480320, epsilon = 1e-9);
        assert_relative_eq!(r.alpha_threshold * r.p_max, 1.0, epsilon = 1e-12);
        assert!(r.bounds.certified);
    }
}
