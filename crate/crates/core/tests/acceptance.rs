//! End-to-end acceptance gate: every headline quantity the toolkit exists
//! to produce, checked at a documented tolerance against an independent
//! route (closed form vs eigensolver, optimizer vs exhaustive oracle,
//! formula identity vs direct evaluation).

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use proptest::prelude::*;

use linkcert_core::certificate::{
    self, a2_p_max, certify_fixed_point, hyperbolic_p_bounds, obstruction_check, scan_a2,
};
use linkcert_core::fixtures;
use linkcert_core::graph::{build_link_graph, verify_admissible, WeightedGraph};
use linkcert_core::plane::incidence_graph;
use linkcert_core::plaplacian::{cayley_graph, check_quotient_bound, lambda1_p, rayleigh_quotient};
use linkcert_core::poincare::{kappa_p_brute, kappa_p_optimize, poincare_ratio, Method};
use linkcert_core::primes::prime_powers_up_to;
use linkcert_core::spectral::{feit_higman_kappa2, kappa2, lambda1};
use linkcert_core::{KappaBound, Verdict};

/// The five connected small fixtures used across the oracle comparisons.
fn small_fixtures() -> Vec<(&'static str, WeightedGraph)> {
    vec![
        ("two-vertex", fixtures::two_vertex()),
        ("path-3", fixtures::path3()),
        ("triangle", fixtures::triangle()),
        ("k4", fixtures::k4()),
        ("cycle-4", fixtures::cycle4()),
    ]
}

/// Rescales every edge weight by c.
fn scale_weights(graph: &WeightedGraph, c: f64) -> WeightedGraph {
    let edges: Vec<(String, String, f64)> = graph
        .edges()
        .iter()
        .map(|e| {
            (
                graph.label(e.u).to_string(),
                graph.label(e.v).to_string(),
                e.w * c,
            )
        })
        .collect();
    WeightedGraph::new(graph.labels().to_vec(), &edges).expect("rescaled graph stays valid")
}

// -- 1 -----------------------------------------------------------------

#[test]
fn incidence_kappa2_matches_the_closed_form() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let graph = incidence_graph(q).unwrap();
        let computed = kappa2(&graph).unwrap();
        let closed = feit_higman_kappa2(q as u128).unwrap();
        assert!(
            ((computed - closed) / closed).abs() < 1e-9,
            "q = {q}: eigensolver {computed} vs closed form {closed}"
        );
    }
}

// -- 2 -----------------------------------------------------------------

#[test]
fn headline_exponent_peaks_at_thirteen() {
    let p13 = a2_p_max(13).unwrap();
    assert!((2.105..=2.107).contains(&p13), "a2_p_max(13) = {p13}");

    let scan = scan_a2(10_000).unwrap();
    assert_eq!(scan.argmax_q, 13);
    assert_relative_eq!(scan.max_p, p13, epsilon = 1e-12);
}

// -- 3 -----------------------------------------------------------------

#[test]
fn exponent_decays_to_two_from_above() {
    let qs: Vec<u64> = prime_powers_up_to(10_000)
        .into_iter()
        .filter(|&q| q >= 13)
        .collect();
    assert!(
        qs.len() > 1_000,
        "prime-power sweep unexpectedly short: {}",
        qs.len()
    );
    let mut prev = f64::INFINITY;
    for q in qs {
        let v = a2_p_max(q as u128).unwrap();
        assert!(v < prev, "a2_p_max not strictly decreasing at q = {q}");
        assert!(v > 2.0, "a2_p_max dipped to {v} at q = {q}");
        prev = v;
    }

    // Far tail: a huge prime power, far beyond integer-squaring range.
    let tail = a2_p_max(1u128 << 100).unwrap();
    assert!(tail > 2.0 && tail - 2.0 < 0.01, "a2_p_max(2^100) = {tail}");
}

// -- 4 -----------------------------------------------------------------

#[test]
fn regular_bipartite_bounds_reproduce_the_exponent_formula() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        let n = (q * q + q + 1) as usize;
        let deg = (q + 1) as f64;
        let report = hyperbolic_p_bounds(
            deg,
            n * (q as usize + 1),
            2 * n,
            feit_higman_kappa2(q as u128).unwrap(),
        )
        .unwrap();
        let direct = a2_p_max(q as u128).unwrap();
        assert!(
            ((report.p_max - direct) / direct).abs() < 1e-9,
            "q = {q}: branch formula {} vs direct {direct}",
            report.p_max
        );
        assert!(report.certified);
    }
}

// -- 5 -----------------------------------------------------------------

#[test]
fn optimizer_agrees_with_the_exhaustive_oracle() {
    for (name, graph) in small_fixtures() {
        for p in [1.5, 2.0, 3.0] {
            let brute = kappa_p_brute(&graph, p, 32).unwrap();
            let opt = kappa_p_optimize(&graph, p, 32, 0, 1e-12).unwrap();
            let resolution = brute.upper - brute.lower;
            let tol = resolution.max(1e-6);
            assert!(
                (opt.lower - brute.lower).abs() <= tol,
                "{name} p = {p}: optimize {} vs brute {} (tol {tol})",
                opt.lower,
                brute.lower
            );
        }
    }

    // At p = 2 the optimizer must land on the eigensolver value, on the
    // small fixtures and on the Fano incidence graph.
    let mut graphs = small_fixtures();
    graphs.push(("fano", incidence_graph(2).unwrap()));
    for (name, graph) in graphs {
        let exact = kappa2(&graph).unwrap();
        let opt = kappa_p_optimize(&graph, 2.0, 32, 0, 1e-12).unwrap();
        assert!(
            (opt.lower - exact).abs() < 1e-7,
            "{name}: optimize {} vs eigensolver {exact}",
            opt.lower
        );
    }
}

// -- 6 -----------------------------------------------------------------

#[test]
fn two_point_constant_has_its_closed_form() {
    let graph = fixtures::two_vertex();
    for p in [1.5, 2.0, 2.5, 3.0, 4.0] {
        let expected = 2f64.powf((1.0 - p) / p);
        let brute = kappa_p_brute(&graph, p, 8).unwrap();
        assert_relative_eq!(brute.lower, expected, epsilon = 1e-9);
        let opt = kappa_p_optimize(&graph, p, 4, 0, 1e-12).unwrap();
        assert_relative_eq!(opt.lower, expected, epsilon = 1e-9);
    }
}

// -- 7 -----------------------------------------------------------------

#[test]
fn p_laplacian_gap_at_two_doubles_the_linear_one() {
    for (name, graph) in small_fixtures() {
        let var = lambda1_p(&graph, 2.0, 32, 0).unwrap();
        let lin = lambda1(&graph).unwrap();
        assert!(
            (var.value - 2.0 * lin).abs() < 1e-8,
            "{name}: lambda1_p {} vs 2 * lambda1 {}",
            var.value,
            2.0 * lin
        );
    }
}

// -- 8 -----------------------------------------------------------------

#[test]
fn quotient_bound_holds_on_cyclic_quotients() {
    // Z/5 with all four nonzero residues as generators: link is K4.
    let z5 = fixtures::z5_spec();
    let z5_link = build_link_graph(&z5, 1.0).unwrap();
    // Z/3 with both nonzero residues: link is a single edge.
    let z3 = fixtures::z3_spec();
    let z3_link = build_link_graph(&z3, 1.0).unwrap();

    for (spec, link, order) in [(&z5, &z5_link, 5usize), (&z3, &z3_link, 3usize)] {
        let group = fixtures::cyclic_group(order);
        let images: BTreeMap<String, usize> = spec
            .elements()
            .iter()
            .map(|s| (s.clone(), s.parse::<usize>().unwrap()))
            .collect();
        let cayley = cayley_graph(&group, &images, spec, link.degrees(), link.omega_e()).unwrap();
        let k2 = kappa2(link).unwrap();
        let report = check_quotient_bound(k2, &cayley, 2.0, 16, 0).unwrap();
        assert!(
            report.claimed,
            "order {order}: 2^(-1/2) kappa_2 should be < 1"
        );
        assert!(
            report.stated_holds.unwrap() && report.stated_margin.unwrap() > 0.0,
            "order {order}: margin {:?}",
            report.stated_margin
        );
    }
}

// -- 9 -----------------------------------------------------------------

fn any_method() -> impl Strategy<Value = Method> {
    prop_oneof![
        Just(Method::Eigen),
        Just(Method::Optimize),
        Just(Method::Brute),
        Just(Method::Interp),
        Just(Method::Path),
    ]
}

fn any_bound() -> impl Strategy<Value = KappaBound> {
    (0.0f64..3.0, any_method()).prop_map(|(value, method)| KappaBound { value, method })
}

proptest! {
    #[test]
    fn no_pass_from_lower_only_bounds(
        a in any_bound(),
        b in any_bound(),
        p in 1.1f64..10.0,
    ) {
        let cert = certify_fixed_point(a, b, p).unwrap();
        if !(a.method.certifies_upper() && b.method.certifies_upper()) {
            prop_assert_ne!(cert.verdict, Verdict::Pass);
        }
    }

    #[test]
    fn no_obstruction_from_upper_only_bounds(
        a in any_bound(),
        b in any_bound(),
        p in 1.1f64..10.0,
    ) {
        let fired = obstruction_check(a, b, p).unwrap();
        if !(a.method.certifies_lower() || b.method.certifies_lower()) {
            prop_assert!(!fired);
        }
        if fired {
            let pstar = p / (p - 1.0);
            let hit_a = a.method.certifies_lower() && a.value >= 2f64.powf(1.0 / p);
            let hit_b = b.method.certifies_lower() && b.value >= 2f64.powf(1.0 / pstar);
            prop_assert!(hit_a || hit_b);
        }
    }
}

// -- 10 ----------------------------------------------------------------

/// Nonconstant test function of length n, entries in [-10, 10].
fn test_function(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0f64..10.0, n).prop_filter("nonconstant", |f| {
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo > 1e-3
    })
}

proptest! {
    #[test]
    fn ratio_is_affine_invariant(
        idx in 0usize..5,
        seedf in test_function(4),
        c in prop_oneof![0.1f64..10.0, -10.0f64..-0.1],
        d in -10.0f64..10.0,
        p in 1.2f64..5.0,
    ) {
        let (_, graph) = small_fixtures().swap_remove(idx);
        let f: Vec<f64> = seedf.iter().take(graph.num_vertices()).cloned().collect();
        prop_assume!(f.len() == graph.num_vertices());
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 1e-3);
        let moved: Vec<f64> = f.iter().map(|x| c * x + d).collect();

        let base = poincare_ratio(&graph, &f, p).unwrap();
        let shifted = poincare_ratio(&graph, &moved, p).unwrap();
        prop_assert!(((base - shifted) / base).abs() < 1e-10,
            "poincare ratio moved: {base} vs {shifted}");

        let rq_base = rayleigh_quotient(&graph, &f, p).unwrap();
        let rq_shifted = rayleigh_quotient(&graph, &moved, p).unwrap();
        prop_assert!(((rq_base - rq_shifted) / rq_base).abs() < 1e-10,
            "rayleigh quotient moved: {rq_base} vs {rq_shifted}");
    }

    #[test]
    fn kappa_ignores_global_weight_scale(
        idx in 0usize..5,
        seedf in test_function(4),
        c in 0.05f64..20.0,
        p in 1.2f64..5.0,
    ) {
        let (_, graph) = small_fixtures().swap_remove(idx);
        let scaled = scale_weights(&graph, c);

        let k = kappa2(&graph).unwrap();
        let ks = kappa2(&scaled).unwrap();
        prop_assert!(((k - ks) / k).abs() < 1e-9, "kappa2 moved: {k} vs {ks}");

        let f: Vec<f64> = seedf.iter().take(graph.num_vertices()).cloned().collect();
        prop_assume!(f.len() == graph.num_vertices());
        let lo = f.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assume!(hi - lo > 1e-3);
        let r = poincare_ratio(&graph, &f, p).unwrap();
        let rs = poincare_ratio(&scaled, &f, p).unwrap();
        prop_assert!(((r - rs) / r).abs() < 1e-9, "ratio moved: {r} vs {rs}");
    }

    #[test]
    fn admissibility_verdict_ignores_global_weight_scale(
        which in 0usize..3,
        c in prop_oneof![Just(0.5f64), Just(3.0f64), 0.05f64..20.0],
    ) {
        let spec = match which {
            0 => fixtures::z3_spec(),
            1 => fixtures::z5_spec(),
            _ => fixtures::stretched_pair_spec(),
        };
        let link = build_link_graph(&spec, 1.0).unwrap();
        let base = verify_admissible(&spec, &link).unwrap();
        let scaled = verify_admissible(&spec, &scale_weights(&link, c)).unwrap();
        prop_assert_eq!(base.admissible, scaled.admissible);
        prop_assert_eq!(base.violations.len(), scaled.violations.len());
    }
}

// -- cross-checks used by several criteria -------------------------------

#[test]
fn certificate_route_is_consistent_end_to_end() {
    // Fano link: kappa_2 < sqrt(2), so the (2, 2) certificate passes and the
    // induced constant is positive.
    let graph = incidence_graph(2).unwrap();
    let k2 = kappa2(&graph).unwrap();
    let bound = KappaBound {
        value: k2,
        method: Method::Eigen,
    };
    let cert = certify_fixed_point(bound, bound, 2.0).unwrap();
    assert_eq!(cert.verdict, Verdict::Pass);
    let kz = certificate::kazhdan_constant(k2, 2.0).unwrap();
    assert!(kz > 0.0);
    assert_relative_eq!(kz, 0.054849202532, epsilon = 1e-10);
}
