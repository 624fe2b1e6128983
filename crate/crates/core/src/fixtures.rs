//! Canonical small inputs shared by tests, benches, and docs.
//!
//! Everything here is an honest hand-buildable object with known closed-form
//! spectra, so downstream numeric claims can be checked against paper-and-
//! pencil values.

use std::collections::BTreeMap;

use crate::graph::{build_link_graph, GeneratingSetSpec, WeightedGraph};
use crate::plaplacian::GroupTable;

fn labeled(labels: &[&str], edges: &[(&str, &str, f64)]) -> WeightedGraph {
    let ls = labels.iter().map(|s| s.to_string()).collect();
    let es: Vec<(String, String, f64)> = edges
        .iter()
        .map(|(u, v, w)| (u.to_string(), v.to_string(), *w))
        .collect();
    WeightedGraph::new(ls, &es).expect("fixture graphs are well formed")
}

/// Single unit-weight edge; normalized Laplacian spectrum {0, 2}.
pub fn two_vertex() -> WeightedGraph {
    labeled(&["1", "2"], &[("1", "2", 1.0)])
}

/// Path a-b-c, unit weights; normalized spectrum {0, 1, 2}.
pub fn path3() -> WeightedGraph {
    labeled(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0)])
}

/// K3, unit weights; normalized lambda_1 = 3/2.
pub fn triangle() -> WeightedGraph {
    labeled(
        &["a", "b", "c"],
        &[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)],
    )
}

/// K4, unit weights; normalized lambda_1 = 4/3.
pub fn k4() -> WeightedGraph {
    complete(4, 1.0)
}

/// 4-cycle, unit weights; normalized lambda_1 = 1.
pub fn cycle4() -> WeightedGraph {
    labeled(
        &["a", "b", "c", "d"],
        &[
            ("a", "b", 1.0),
            ("b", "c", 1.0),
            ("c", "d", 1.0),
            ("d", "a", 1.0),
        ],
    )
}

/// Complete graph on `n` vertices labeled "1".."n", uniform weight `w`.
pub fn complete(n: usize, w: f64) -> WeightedGraph {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((labels[u].clone(), labels[v].clone(), w));
        }
    }
    WeightedGraph::new(labels, &edges).expect("complete graph is well formed")
}

fn cyclic_spec(modulus: u64) -> GeneratingSetSpec {
    // S = {1, .., modulus-1} inside Z/modulus; s^-1 t = t - s mod modulus.
    let labels: Vec<String> = (1..modulus).map(|i| i.to_string()).collect();
    let mut inverse = BTreeMap::new();
    for i in 1..modulus {
        inverse.insert(i.to_string(), (modulus - i).to_string());
    }
    let mut products = Vec::new();
    for s in 1..modulus {
        for t in 1..modulus {
            if s == t {
                continue;
            }
            let r = (modulus + t - s) % modulus;
            if r != 0 {
                products.push((s.to_string(), t.to_string(), r.to_string()));
            }
        }
    }
    GeneratingSetSpec::new(labels, &inverse, &products)
        .expect("cyclic generating sets are well formed")
}

/// S = {1, 2} in Z/3: link graph is the single-edge two-vertex graph.
pub fn z3_spec() -> GeneratingSetSpec {
    cyclic_spec(3)
}

/// S = {1, 2, 3, 4} in Z/5: link graph is K4.
pub fn z5_spec() -> GeneratingSetSpec {
    cyclic_spec(5)
}

/// Free-group generating set {a, a^-1, b, b^-1}: no product of two distinct
/// members is a member, so the link graph has four vertices and no edges.
pub fn free_group_spec() -> GeneratingSetSpec {
    let labels: Vec<String> = ["a", "A", "b", "B"].iter().map(|s| s.to_string()).collect();
    let mut inverse = BTreeMap::new();
    inverse.insert("a".to_string(), "A".to_string());
    inverse.insert("A".to_string(), "a".to_string());
    inverse.insert("b".to_string(), "B".to_string());
    inverse.insert("B".to_string(), "b".to_string());
    GeneratingSetSpec::new(labels, &inverse, &[]).expect("free-group spec is well formed")
}

/// Link graph of [`free_group_spec`]: 4 isolated vertices.
pub fn free_group_link() -> WeightedGraph {
    build_link_graph(&free_group_spec(), 1.0).expect("free-group link builds")
}

/// Generating set whose link graph is the path a-x-y-b with inv(a)=b and
/// inv(x)=y, so the hop distance d(a, a^-1) = 3. Product labels are chosen
/// to satisfy the pairing consistency; only the metric structure matters.
pub fn stretched_pair_spec() -> GeneratingSetSpec {
    let labels: Vec<String> = ["a", "x", "y", "b"].iter().map(|s| s.to_string()).collect();
    let mut inverse = BTreeMap::new();
    inverse.insert("a".to_string(), "b".to_string());
    inverse.insert("b".to_string(), "a".to_string());
    inverse.insert("x".to_string(), "y".to_string());
    inverse.insert("y".to_string(), "x".to_string());
    let products = vec![
        // edge {a, x}
        ("a".to_string(), "x".to_string(), "x".to_string()),
        ("x".to_string(), "a".to_string(), "y".to_string()),
        // edge {x, y}
        ("x".to_string(), "y".to_string(), "a".to_string()),
        ("y".to_string(), "x".to_string(), "b".to_string()),
        // edge {y, b}
        ("y".to_string(), "b".to_string(), "x".to_string()),
        ("b".to_string(), "y".to_string(), "y".to_string()),
    ];
    GeneratingSetSpec::new(labels, &inverse, &products).expect("stretched-pair spec is well formed")
}

/// Z/n as a multiplication table, elements labeled "0".."n-1".
pub fn cyclic_group(n: usize) -> GroupTable {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push((a + b) % n);
        }
    }
    GroupTable::new(labels, table).expect("cyclic group table is well formed")
}
