//! On-disk document types and canonical serialization.
//!
//! One JSON document shape serves every graph-like input: `vertices` plus
//! optional `inverse`/`products` (the generating-set side) plus `edges`
//! (the weighted-graph side). A document with only `vertices` and `edges`
//! supports spectral operations; admissibility checks and link-graph
//! construction additionally need `inverse` (and use `products` when
//! present). Group tables travel in their own document.
//!
//! Serialization is canonical: pretty-printed with sorted map keys (maps
//! are `BTreeMap`s) and a trailing newline, so identical values produce
//! byte-identical files and outputs round-trip exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{GeneratingSetSpec, WeightedGraph};
use crate::plaplacian::GroupTable;

/// One undirected edge in a graph document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub w: f64,
}

/// The graph/spec document: the single file format consumed by the CLI and
/// produced by the incidence-graph and link-graph constructions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<String>,
    /// Inverse involution on the vertices, when they form a symmetric
    /// generating set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<BTreeMap<String, String>>,
    /// Product triples [s, t, r] meaning s^-1 t = r within the set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<(String, String, String)>>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

impl GraphDocument {
    /// Interprets the document as a bare weighted graph (ignores the
    /// generating-set fields).
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let tuples: Vec<(String, String, f64)> = self
            .edges
            .iter()
            .map(|e| (e.u.clone(), e.v.clone(), e.w))
            .collect();
        WeightedGraph::new(self.vertices.clone(), &tuples)
    }

    /// Interprets the generating-set fields. Fails with the first missing
    /// inverse when the document has no `inverse` map at all.
    pub fn to_spec(&self) -> Result<GeneratingSetSpec> {
        let empty = BTreeMap::new();
        let inverse = self.inverse.as_ref().unwrap_or(&empty);
        let products: &[(String, String, String)] = self.products.as_deref().unwrap_or(&[]);
        GeneratingSetSpec::new(self.vertices.clone(), inverse, products)
    }

    /// Captures a graph as a document (graph side only).
    pub fn from_graph(graph: &WeightedGraph) -> Self {
        GraphDocument {
            vertices: graph.labels().to_vec(),
            inverse: None,
            products: None,
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: graph.label(e.u).to_string(),
                    v: graph.label(e.v).to_string(),
                    w: e.w,
                })
                .collect(),
        }
    }

    /// Captures a generating set together with its link graph, so the
    /// output document supports both graph and spec operations.
    pub fn from_spec_and_graph(spec: &GeneratingSetSpec, graph: &WeightedGraph) -> Self {
        let mut doc = GraphDocument::from_graph(graph);
        doc.inverse = Some(
            spec.elements()
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), spec.elements()[spec.inv(i)].clone()))
                .collect(),
        );
        doc.products = Some(
            spec.products()
                .map(|((s, t), r)| {
                    (
                        spec.elements()[s].clone(),
                        spec.elements()[t].clone(),
                        spec.elements()[r].clone(),
                    )
                })
                .collect(),
        );
        doc
    }
}

/// The group document: a full multiplication table plus generator images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub elements: Vec<String>,
    /// Row-major multiplication table of element indices:
    /// `table[a * n + b]` is the index of `a * b`.
    pub table: Vec<usize>,
    /// Generator label -> group element index.
    #[serde(default)]
    pub images: BTreeMap<String, usize>,
}

impl GroupDocument {
    pub fn to_group(&self) -> Result<GroupTable> {
        GroupTable::new(self.elements.clone(), self.table.clone())
    }
}

/// Canonical JSON bytes: pretty-printed, trailing newline. Map keys come
/// out sorted because every map in the document types is ordered.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("document types always serialize");
    s.push('\n');
    s
}

/// Parses a document from JSON text, wrapping the underlying parser error.
pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> std::result::Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fixtures;

    #[test]
    fn graph_round_trips_bit_exactly() {
        let graph = crate::plane::incidence_graph(2).unwrap();
        let doc = GraphDocument::from_graph(&graph);
        let text = to_canonical_json(&doc);
        let back: GraphDocument = from_json(&text).unwrap();
        assert_eq!(back, doc);
        let graph2 = back.to_graph().unwrap();
        assert_eq!(graph2.labels(), graph.labels());
        assert_eq!(graph2.edges(), graph.edges());
        // Bit-exact: a second serialization is byte-identical.
        assert_eq!(to_canonical_json(&back), text);
    }

    #[test]
    fn spec_round_trips_through_document() {
        let spec = fixtures::z5_spec();
        let link = crate::graph::build_link_graph(&spec, 1.0).unwrap();
        let doc = GraphDocument::from_spec_and_graph(&spec, &link);
        let text = to_canonical_json(&doc);
        let back: GraphDocument = from_json(&text).unwrap();
        let spec2 = back.to_spec().unwrap();
        assert_eq!(spec2.elements(), spec.elements());
        for i in 0..spec.len() {
            assert_eq!(spec2.inv(i), spec.inv(i));
        }
        assert_eq!(
            spec2.products().collect::<Vec<_>>(),
            spec.products().collect::<Vec<_>>()
        );
        let link2 = back.to_graph().unwrap();
        assert_eq!(link2.edges(), link.edges());
    }

    #[test]
    fn graph_only_document_rejects_spec_interpretation() {
        let doc = GraphDocument::from_graph(&fixtures::triangle());
        assert!(matches!(doc.to_spec(), Err(Error::MissingInverse(_))));
    }

    #[test]
    fn group_document_builds_a_group() {
        let doc = GroupDocument {
            elements: (0..4).map(|i| i.to_string()).collect(),
            table: (0..4)
                .flat_map(|a| (0..4).map(move |b| (a + b) % 4))
                .collect(),
            images: BTreeMap::new(),
        };
        let group = doc.to_group().unwrap();
        assert_eq!(group.order(), 4);
        assert_eq!(group.inv(1), 3);
    }

    #[test]
    fn missing_edges_field_defaults_to_empty() {
        let back: GraphDocument = from_json(r#"{"vertices": ["a", "b"]}"#).unwrap();
        assert!(back.edges.is_empty());
        // No edges means isolated vertices, which the graph side rejects
        // downstream; the parse itself succeeds.
        assert_eq!(back.vertices.len(), 2);
    }
}
