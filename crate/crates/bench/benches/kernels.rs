//! Criterion benchmarks for the numeric kernels behind the certification
//! pipeline: dense spectral decomposition of incidence link graphs, the
//! seeded nonconvex kappa_p search, p-Laplacian descent, and the closed-form
//! threshold scan.
//!
//! Run with `cargo bench -p linkcert-bench`.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linkcert_core::certificate::scan_a2;
use linkcert_core::fixtures;
use linkcert_core::plane::ProjectivePlane;
use linkcert_core::plaplacian::lambda1_p;
use linkcert_core::poincare::kappa_p_optimize;
use linkcert_core::spectral;

/// Restart budget for the seeded optimizers: small enough that one bench
/// iteration stays well under a second, large enough to exercise the
/// parallel restart merge.
const RESTARTS: usize = 4;

/// Shared seed so optimizer benches measure the same trajectories each run.
const SEED: u64 = 0;

/// Convergence tolerance, matching the CLI default.
const TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Dense spectral decomposition
// ---------------------------------------------------------------------------

/// Full normalized-Laplacian spectrum of the point-line incidence graph for
/// each small prime power q. Vertex count is 2(q^2 + q + 1), so this walks
/// the eigensolver from 14x14 up to 182x182.
fn bench_spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum/incidence");
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let plane = ProjectivePlane::new(q).expect("q is a prime power");
        let graph = plane.incidence_graph();
        group.bench_with_input(BenchmarkId::from_parameter(q), &graph, |b, g| {
            b.iter(|| spectral::spectrum(black_box(g)).expect("incidence graphs are connected"));
        });
    }
    group.finish();
}

// ---------------------------------------------------------------------------
// Seeded nonconvex searches
// ---------------------------------------------------------------------------

/// Multi-restart gradient ascent for kappa_p on the 14-vertex incidence
/// graph of the plane of order 2, at an exponent away from the spectral
/// special case p = 2.
fn bench_kappa_p_optimize(c: &mut Criterion) {
    let graph = ProjectivePlane::new(2)
        .expect("2 is prime")
        .incidence_graph();
    let mut group = c.benchmark_group("kappa_p/optimize");
    group.sample_size(20);
    group.bench_function("incidence_q2_p2.5", |b| {
        b.iter(|| {
            kappa_p_optimize(black_box(&graph), 2.5, RESTARTS, SEED, TOL)
                .expect("graph is connected and p is finite")
        });
    });
    group.finish();
}

/// Multi-restart descent for the first p-Laplacian eigenvalue on K4 at
/// p = 3, the smallest fixture with a nontrivial ordered-sum landscape.
fn bench_lambda1_p(c: &mut Criterion) {
    let graph = fixtures::k4();
    let mut group = c.benchmark_group("lambda1_p/descent");
    group.sample_size(20);
    group.bench_function("k4_p3", |b| {
        b.iter(|| {
            lambda1_p(black_box(&graph), 3.0, RESTARTS, SEED).expect("K4 is connected and p > 1")
        });
    });
    group.finish();
}

// ---------------------------------------------------------------------------
// Closed-form threshold scan
// ---------------------------------------------------------------------------

/// Prime-power enumeration plus the closed-form p_max evaluation for every
/// q up to 10^4; measures the arithmetic side of the toolkit in isolation.
fn bench_scan(c: &mut Criterion) {
    c.bench_function("scan_a2/10k", |b| {
        b.iter(|| scan_a2(black_box(10_000)).expect("scan bound is in range"));
    });
}

criterion_group!(
    kernels,
    bench_spectrum,
    bench_kappa_p_optimize,
    bench_lambda1_p,
    bench_scan
);
criterion_main!(kernels);
