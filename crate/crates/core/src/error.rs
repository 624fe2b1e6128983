//! Crate-wide error type.
//!
//! Variants fall into two informal families: structural errors (the input
//! data is malformed: bad labels, inconsistent tables, wrong lengths) and
//! domain errors (the data is well formed but a mathematical precondition
//! fails: disconnected graph, q not a prime power, p out of range). The
//! distinction matters to callers that map errors to exit codes; the library
//! itself reports both through this one enum.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // ---- graph structure ----
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("edge {{{u}, {v}}} has non-positive or non-finite weight {w}")]
    BadWeight { u: String, v: String, w: f64 },
    #[error("function has {got} entries, expected one per vertex ({expected})")]
    WrongLength { expected: usize, got: usize },

    // ---- generating-set structure ----
    #[error("element `{0}` has no inverse entry")]
    MissingInverse(String),
    #[error("inverse map is not an involution at `{s}` (inv(inv({s})) = `{back}`)")]
    InverseNotInvolution { s: String, back: String },
    #[error("product table has entry ({s}, {s}); s^-1 s is the identity, which is not in S")]
    IdentityProduct { s: String },
    #[error("product table repeats the pair ({s}, {t}) with conflicting values")]
    DuplicateProduct { s: String, t: String },
    #[error("inconsistent product table at ({s}, {t}): products({t}, {s}) absent or not inv(products({s}, {t}))")]
    InconsistentProducts { s: String, t: String },
    #[error("graph vertices do not match the generating set (expected `{expected}` at position {position})")]
    VertexMismatch { expected: String, position: usize },

    // ---- arithmetic domain ----
    #[error("q = {q} is not a prime power ({q} = {a} * {b})")]
    NotPrimePower { q: u128, a: u128, b: u128 },
    #[error("q = {q} is composite (Miller-Rabin witness {witness}) with no factor <= 10^6; no factorization exhibited")]
    CompositeNoFactor { q: u128, witness: u128 },
    #[error("q = {q} must be at least 2")]
    QTooSmall { q: u128 },
    #[error(
        "q = {q} exceeds the deterministic primality range (< 3.3e24) and has no factor <= 10^6"
    )]
    PrimalityOutOfRange { q: u128 },
    #[error("q = {q} is too large to build explicitly (limit {limit})")]
    ConstructionTooLarge { q: u128, limit: u128 },

    // ---- analytic preconditions ----
    #[error("p = {p} violates: {requirement}")]
    InvalidP { p: f64, requirement: &'static str },
    #[error("kappa input {value} is not a finite nonnegative real")]
    BadKappa { value: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex `{0}` is isolated (degree 0)")]
    IsolatedVertex(String),
    #[error("function is constant (or constant per component): Rayleigh denominator is zero")]
    ConstantFunction,
    #[error("graph has {n} vertices; this operation needs between {min} and {max}")]
    VertexCountOutOfRange { n: usize, min: usize, max: usize },
    #[error("graph is irregular (degrees in [{deg_min}, {deg_max}]); pass explicit degree bounds for the conservative variant")]
    NotRegular { deg_min: f64, deg_max: f64 },
    #[error("report carries no certified p-range")]
    NoCertifiedRange,
    #[error("no eigenvalue above the zero threshold")]
    NoPositiveEigenvalue,

    // ---- group tables and Cayley construction ----
    #[error("multiplication table has {got} entries, expected {expected}")]
    BadTableSize { expected: usize, got: usize },
    #[error("multiplication table entry {value} at ({row}, {col}) is out of range")]
    TableIndexOutOfRange {
        row: usize,
        col: usize,
        value: usize,
    },
    #[error("multiplication table has no two-sided identity")]
    NoIdentity,
    #[error("multiplication table is not a Latin square at row/column of `{0}`")]
    NotLatin(String),
    #[error("multiplication is not associative at (`{a}`, `{b}`, `{c}`)")]
    NotAssociative { a: String, b: String, c: String },
    #[error("generator `{0}` has no image in the group")]
    MissingImage(String),
    #[error("generator `{s}` maps to element index {idx}, out of range")]
    ImageOutOfRange { s: String, idx: usize },
    #[error("generator `{0}` maps to the identity; Cayley edges would be self-loops")]
    IdentityImage(String),
    #[error("images break the involution at `{s}`: images({s})^-1 != images(inv({s}))")]
    InvolutionMismatch { s: String },
    #[error("link degrees are asymmetric at `{s}`: deg({s}) != deg(inv({s})); unordered Cayley weights would be ambiguous")]
    DegreeAsymmetry { s: String },
    #[error("generator images reach only {reached} of {total} group elements")]
    NotGenerating { reached: usize, total: usize },
}
