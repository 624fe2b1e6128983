//! Command-line surface for the certification toolkit: argument parsing,
//! file I/O, and deterministic report rendering.
//!
//! Every run prints a single report to standard output: the full effective
//! configuration (defaults resolved), then the subcommand's result.
//! Structured mode renders the report as canonical JSON with numbers at
//! [`STRUCTURED_SIG_DIGITS`] significant digits; human mode renders an
//! indented tree at [`HUMAN_SIG_DIGITS`]. Reruns with identical
//! configuration are byte-identical; seeds enter only through flags.
//!
//! Exit codes: 0 success, 1 file or parse errors, 2 domain errors (bad
//! orders, invalid exponents, disconnected graphs), 64 usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use linkcert_core::certificate::{
    a2_report, certify_fixed_point, confdim_lower_bound, hyperbolic_p_bounds_for_graph,
    kazhdan_constant, obstruction_check, scan_a2,
};
use linkcert_core::format::{to_canonical_json, GraphDocument, GroupDocument};
use linkcert_core::graph::{build_link_graph, verify_admissible};
use linkcert_core::plane::incidence_graph;
use linkcert_core::plaplacian::{cayley_graph, check_quotient_bound, lambda1_p};
use linkcert_core::poincare::{
    kappa_inf_lower, kappa_p_brute, kappa_p_interp_upper, kappa_p_optimize,
};
use linkcert_core::spectral;
use linkcert_core::{
    AdmissibilityReport, Certificate, GraphStats, KappaBound, Method, PoincareEstimate,
    QuotientBoundReport, Verdict, WeightedGraph,
};

// ---------------------------------------------------------------------------
// Defaults and rendering precision
// ---------------------------------------------------------------------------

/// Optimizer restarts when --restarts is not given.
pub const DEFAULT_RESTARTS: usize = 32;

/// Random-stream seed when --seed is not given.
pub const DEFAULT_SEED: u64 = 0;

/// Optimizer convergence tolerance when --tol is not given.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Brute-force mesh resolution when --mesh is not given.
pub const DEFAULT_MESH: usize = 32;

/// Human mode rounds numbers to this many significant digits.
pub const HUMAN_SIG_DIGITS: usize = 6;

/// Structured mode rounds numbers to this many significant digits.
pub const STRUCTURED_SIG_DIGITS: usize = 9;

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "linkcert",
    version,
    about = "Certify fixed-point and cohomology-vanishing criteria from link-graph data"
)]
pub struct Cli {
    /// Report rendering: indented text or canonical JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Human => "human",
            Format::Structured => "structured",
        }
    }
}

/// Estimation method for `kappa`; when omitted it resolves from p
/// (2 -> eigen, inf -> path, anything else -> optimize).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Exact p = 2 eigendecomposition
    Eigen,
    /// Seeded gradient ascent; certified lower bound
    Optimize,
    /// Exhaustive mesh search on graphs with at most 5 vertices
    Brute,
    /// Norm-interpolation closed form; certified upper bound, p >= 2, regular graphs
    Interp,
    /// Path-metric lower bound at p = inf
    Path,
}

/// Bound selection for `certify`; auto picks per side by exponent and size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KappaMethodArg {
    /// p = 2 -> eigen; at most 5 vertices -> brute; else optimize plus an
    /// interpolation upper bound where one exists
    Auto,
    Eigen,
    Optimize,
    Brute,
    Interp,
}

impl KappaMethodArg {
    fn as_str(self) -> &'static str {
        match self {
            KappaMethodArg::Auto => "auto",
            KappaMethodArg::Eigen => "eigen",
            KappaMethodArg::Optimize => "optimize",
            KappaMethodArg::Brute => "brute",
            KappaMethodArg::Interp => "interp",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Threshold report for the order-q incidence construction
    A2 {
        /// Projective-plane order; must be a prime power
        #[arg(long)]
        q: u64,
        /// Also write the incidence graph here, in the graph file format
        #[arg(long, value_name = "PATH")]
        emit_graph: Option<PathBuf>,
    },
    /// Threshold table over every prime power up to --q-max
    ScanA2 {
        /// Upper end of the prime-power sweep (inclusive)
        #[arg(long)]
        q_max: u64,
    },
    /// Poincare-constant estimate for a graph at one exponent
    Kappa {
        /// Graph file to analyze
        file: PathBuf,
        /// Exponent p (> 1), or "inf" for the path-metric lower bound
        #[arg(long, default_value = "2")]
        p: String,
        /// Estimation method; resolved from p when omitted
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Optimizer restarts
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Seed for the optimizer's random streams
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Optimizer convergence tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Mesh resolution for the brute method
        #[arg(long, default_value_t = DEFAULT_MESH)]
        mesh: usize,
        /// Include the full eigenvalue list (eigen method only)
        #[arg(long)]
        spectrum: bool,
    },
    /// Two-sided fixed-point certificate at the exponent pair (p, p*)
    Certify {
        /// Graph file to certify
        file: PathBuf,
        /// Exponent p (finite, > 1)
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// How to bound kappa on each side
        #[arg(long, value_enum, default_value_t = KappaMethodArg::Auto)]
        kappa_method: KappaMethodArg,
        /// Optimizer restarts
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Seed for the optimizer's random streams
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Optimizer convergence tolerance
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Mesh resolution for the brute method
        #[arg(long, default_value_t = DEFAULT_MESH)]
        mesh: usize,
    },
    /// Conformal-dimension lower bound from the certified exponent range
    Confdim {
        /// Graph file to analyze
        file: PathBuf,
        /// Degree lower bound for the conservative irregular variant
        #[arg(long, requires = "deg_max")]
        deg_min: Option<f64>,
        /// Degree upper bound for the conservative irregular variant
        #[arg(long, requires = "deg_min")]
        deg_max: Option<f64>,
    },
    /// First positive p-Laplacian eigenvalue of a graph
    Plaplacian {
        /// Graph file to analyze
        file: PathBuf,
        /// Exponent p (finite, > 1)
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Optimizer restarts
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Seed for the optimizer's random streams
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Cayley graph of a finite quotient under the minimal admissible weights
    Cayley {
        /// Group file: elements, row-major table, generator images
        file: PathBuf,
        /// Link file: generating-set spec plus weighted edges
        #[arg(long, value_name = "PATH")]
        link: PathBuf,
        /// Also check the induced spectral-gap bound at --p
        #[arg(long)]
        check_bound: bool,
        /// Exponent for --check-bound (finite, > 1)
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Optimizer restarts for --check-bound
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Seed for --check-bound
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the Cayley graph here, in the graph file format
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Build the link graph of a generating-set spec
    LinkGraph {
        /// Spec file with vertices, inverse map, and product triples
        file: PathBuf,
        /// Weight given to every link edge
        #[arg(long, default_value_t = 1.0)]
        default_weight: f64,
        /// Write the resulting graph file here
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check weight admissibility of a spec-plus-graph file
    CheckAdmissible {
        /// Spec-plus-graph file to check
        file: PathBuf,
    },
}

// ---------------------------------------------------------------------------
// Failures and exit codes
// ---------------------------------------------------------------------------

/// A run failure carrying its process exit code: 1 for file and parse
/// problems, 2 for domain errors, 64 for usage errors caught after clap.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn io(message: String) -> Self {
        Failure { code: 1, message }
    }

    fn domain(message: String) -> Self {
        Failure { code: 2, message }
    }

    fn usage(message: String) -> Self {
        Failure { code: 64, message }
    }
}

/// Maps a core-library error onto the domain exit code.
fn dom<T>(result: linkcert_core::Result<T>) -> Result<T, Failure> {
    result.map_err(|e| Failure::domain(e.to_string()))
}

// ---------------------------------------------------------------------------
// Report envelope
// ---------------------------------------------------------------------------

/// The effective configuration of a run, echoed in full into the report.
/// Fields that do not apply to the command are omitted; fields with
/// defaults always show the resolved value.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub link: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub emit_graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_max: Option<u64>,
    /// Exponent as given ("2", "2.5", "inf"); kept textual so that the
    /// infinite case survives the round trip.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa_method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mesh: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub default_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deg_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deg_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub check_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spectrum: Option<bool>,
}

/// What a run prints: the effective config plus the command's result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub result: Value,
}

// ---------------------------------------------------------------------------
// Per-command result shapes
// ---------------------------------------------------------------------------

/// `kappa` result: the estimate, plus the exact p = 2 spectral data when
/// the eigen method produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KappaOutput {
    pub estimate: PoincareEstimate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicity_of_zero: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eigenvalues: Option<Vec<f64>>,
}

/// One side of a certificate: whatever certified bounds the chosen method
/// yields at this exponent. Either bound may be absent (optimize has no
/// upper bound away from p = 2; interp has no lower bound).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SideBounds {
    pub exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<KappaBound>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<KappaBound>,
}

/// `certify` result: both sides' bounds, the composed certificate, and the
/// derived constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifyOutput {
    pub kappa_p: SideBounds,
    pub kappa_pstar: SideBounds,
    pub certificate: Certificate,
    /// Displacement constant from the p* upper bound; positive only when
    /// that bound certifies the criterion.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kazhdan_constant: Option<f64>,
    /// True when a certified lower bound already blocks the fixed-point
    /// route at this exponent pair.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub obstruction: Option<bool>,
}

/// `confdim` result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfdimOutput {
    pub bounds: linkcert_core::PRangeReport,
    pub confdim_lower: f64,
}

/// `cayley` result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyOutput {
    pub group_order: usize,
    pub generator_images: BTreeMap<String, usize>,
    pub stats: GraphStats,
    /// The link-side upper bound fed into --check-bound.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kappa_p_upper: Option<KappaBound>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bound: Option<QuotientBoundReport>,
}

/// `link-graph` result: the built graph's statistics, its admissibility
/// under the uniform weight, and the emitted document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinkGraphOutput {
    pub stats: GraphStats,
    pub admissibility: AdmissibilityReport,
    pub document: GraphDocument,
}

/// `check-admissible` result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdmissibleOutput {
    pub stats: GraphStats,
    pub admissibility: AdmissibilityReport,
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

/// Runs the parsed command and assembles its report. I/O failures map to
/// exit 1, core-library errors to exit 2.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let format = cli.format.as_str().to_string();
    match &cli.command {
        Command::A2 { q, emit_graph } => run_a2(*q, emit_graph.as_deref(), format),
        Command::ScanA2 { q_max } => run_scan_a2(*q_max, format),
        Command::Kappa {
            file,
            p,
            method,
            restarts,
            seed,
            tol,
            mesh,
            spectrum,
        } => run_kappa(
            file, p, *method, *restarts, *seed, *tol, *mesh, *spectrum, format,
        ),
        Command::Certify {
            file,
            p,
            kappa_method,
            restarts,
            seed,
            tol,
            mesh,
        } => run_certify(
            file,
            *p,
            *kappa_method,
            *restarts,
            *seed,
            *tol,
            *mesh,
            format,
        ),
        Command::Confdim {
            file,
            deg_min,
            deg_max,
        } => run_confdim(file, *deg_min, *deg_max, format),
        Command::Plaplacian {
            file,
            p,
            restarts,
            seed,
        } => run_plaplacian(file, *p, *restarts, *seed, format),
        Command::Cayley {
            file,
            link,
            check_bound,
            p,
            restarts,
            seed,
            out,
        } => run_cayley(
            file,
            link,
            *check_bound,
            *p,
            *restarts,
            *seed,
            out.as_deref(),
            format,
        ),
        Command::LinkGraph {
            file,
            default_weight,
            out,
        } => run_link_graph(file, *default_weight, out.as_deref(), format),
        Command::CheckAdmissible { file } => run_check_admissible(file, format),
    }
}

fn run_a2(q: u64, emit_graph: Option<&Path>, format: String) -> Result<Report, Failure> {
    let report = dom(a2_report(q as u128))?;
    if let Some(path) = emit_graph {
        let graph = dom(incidence_graph(q))?;
        write_text(path, &to_canonical_json(&GraphDocument::from_graph(&graph)))?;
    }
    Ok(Report {
        config: RunConfig {
            command: "a2".into(),
            format,
            q: Some(q),
            emit_graph: emit_graph.map(path_str),
            ..Default::default()
        },
        result: to_result(&report)?,
    })
}

fn run_scan_a2(q_max: u64, format: String) -> Result<Report, Failure> {
    let scan = dom(scan_a2(q_max))?;
    Ok(Report {
        config: RunConfig {
            command: "scan-a2".into(),
            format,
            q_max: Some(q_max),
            ..Default::default()
        },
        result: to_result(&scan)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_kappa(
    file: &Path,
    p_text: &str,
    method: Option<MethodArg>,
    restarts: usize,
    seed: u64,
    tol: f64,
    mesh: usize,
    spectrum: bool,
    format: String,
) -> Result<Report, Failure> {
    // Flag validation precedes I/O, matching how clap treats typed flags.
    let p = parse_exponent(p_text)?;
    let doc: GraphDocument = load(file)?;
    let method = method.unwrap_or(if p == 2.0 {
        MethodArg::Eigen
    } else if p == f64::INFINITY {
        MethodArg::Path
    } else {
        MethodArg::Optimize
    });

    let output = match method {
        MethodArg::Eigen => {
            if p != 2.0 {
                return Err(Failure::domain(format!(
                    "the eigen method needs --p 2, got {p_text}"
                )));
            }
            let graph = dom(doc.to_graph())?;
            // kappa2() refuses disconnected graphs, where no Poincare
            // constant exists; spectrum() alone would not.
            let kappa2 = dom(spectral::kappa2(&graph))?;
            let spec = dom(spectral::spectrum(&graph))?;
            KappaOutput {
                estimate: PoincareEstimate {
                    p: 2.0,
                    lower: kappa2,
                    upper: kappa2,
                    method: Method::Eigen,
                    witness: None,
                },
                kappa2: Some(kappa2),
                lambda1: Some(spec.lambda1),
                multiplicity_of_zero: Some(spec.multiplicity_of_zero),
                max_residual: Some(spec.max_residual),
                eigenvalues: spectrum.then_some(spec.eigenvalues),
            }
        }
        MethodArg::Optimize => {
            let graph = dom(doc.to_graph())?;
            plain(dom(kappa_p_optimize(&graph, p, restarts, seed, tol))?)
        }
        MethodArg::Brute => {
            let graph = dom(doc.to_graph())?;
            plain(dom(kappa_p_brute(&graph, p, mesh))?)
        }
        MethodArg::Interp => {
            let graph = dom(doc.to_graph())?;
            plain(interp_estimate(&graph, p)?)
        }
        MethodArg::Path => {
            if p != f64::INFINITY {
                return Err(Failure::domain(format!(
                    "the path method needs --p inf, got {p_text}"
                )));
            }
            let spec = dom(doc.to_spec())?;
            let graph = dom(doc.to_graph())?;
            plain(dom(kappa_inf_lower(&spec, &graph))?)
        }
    };

    Ok(Report {
        config: RunConfig {
            command: "kappa".into(),
            format,
            input: Some(path_str(file)),
            p: Some(fmt_exponent(p)),
            method: Some(method_arg_name(method).into()),
            restarts: Some(restarts),
            seed: Some(seed),
            tol: Some(tol),
            mesh: Some(mesh),
            spectrum: Some(spectrum),
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

/// Wraps a bare estimate into the kappa result shape.
fn plain(estimate: PoincareEstimate) -> KappaOutput {
    KappaOutput {
        estimate,
        kappa2: None,
        lambda1: None,
        multiplicity_of_zero: None,
        max_residual: None,
        eigenvalues: None,
    }
}

/// Interpolation upper bound as an estimate: regular graphs, p >= 2; the
/// lower bound is the trivial 0.
fn interp_estimate(graph: &WeightedGraph, p: f64) -> Result<PoincareEstimate, Failure> {
    let stats = graph.stats();
    if !stats.regular {
        let err = linkcert_core::Error::NotRegular {
            deg_min: stats.deg_min,
            deg_max: stats.deg_max,
        };
        return Err(Failure::domain(err.to_string()));
    }
    let kappa2 = dom(spectral::kappa2(graph))?;
    let upper = dom(kappa_p_interp_upper(
        stats.deg_max,
        stats.omega_e,
        kappa2,
        p,
    ))?;
    Ok(PoincareEstimate {
        p,
        lower: 0.0,
        upper,
        method: Method::Interp,
        witness: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_certify(
    file: &Path,
    p: f64,
    kappa_method: KappaMethodArg,
    restarts: usize,
    seed: u64,
    tol: f64,
    mesh: usize,
    format: String,
) -> Result<Report, Failure> {
    let doc: GraphDocument = load(file)?;
    let graph = dom(doc.to_graph())?;
    if !(p.is_finite() && p > 1.0) {
        return Err(Failure::domain(format!(
            "invalid p = {p}: need 1 < p < infinity"
        )));
    }
    let pstar = p / (p - 1.0);

    let side_p = side_bounds(&graph, p, kappa_method, restarts, seed, tol, mesh)?;
    let side_pstar = side_bounds(&graph, pstar, kappa_method, restarts, seed, tol, mesh)?;

    // Each direction of the verdict is evaluated on the bounds that are
    // sound for it: Pass may only come from the upper bounds, Fail only
    // from the lower bounds. Anything else is reported as inconclusive.
    let pass_cert = match (side_p.upper, side_pstar.upper) {
        (Some(a), Some(b)) => Some(dom(certify_fixed_point(a, b, p))?),
        _ => None,
    };
    let fail_cert = match (side_p.lower, side_pstar.lower) {
        (Some(a), Some(b)) => Some(dom(certify_fixed_point(a, b, p))?),
        _ => None,
    };
    let certificate = if let Some(c) = pass_cert.as_ref().filter(|c| c.verdict == Verdict::Pass) {
        c.clone()
    } else if let Some(c) = fail_cert.as_ref().filter(|c| c.verdict == Verdict::Fail) {
        c.clone()
    } else {
        let mut c = pass_cert
            .or(fail_cert)
            .ok_or_else(|| Failure::domain("no bounds produced for either side".into()))?;
        c.verdict = Verdict::Inconclusive;
        c
    };

    let kazhdan = match side_pstar.upper {
        Some(upper) => Some(dom(kazhdan_constant(upper.value, pstar))?),
        None => None,
    };
    let obstruction = match (side_p.lower, side_pstar.lower) {
        (Some(a), Some(b)) => Some(dom(obstruction_check(a, b, p))?),
        _ => None,
    };

    let output = CertifyOutput {
        kappa_p: side_p,
        kappa_pstar: side_pstar,
        certificate,
        kazhdan_constant: kazhdan,
        obstruction,
    };
    Ok(Report {
        config: RunConfig {
            command: "certify".into(),
            format,
            input: Some(path_str(file)),
            p: Some(fmt_exponent(p)),
            kappa_method: Some(kappa_method.as_str().into()),
            restarts: Some(restarts),
            seed: Some(seed),
            tol: Some(tol),
            mesh: Some(mesh),
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

/// Certified bounds for one exponent under the chosen selection policy.
fn side_bounds(
    graph: &WeightedGraph,
    exponent: f64,
    method: KappaMethodArg,
    restarts: usize,
    seed: u64,
    tol: f64,
    mesh: usize,
) -> Result<SideBounds, Failure> {
    let n = graph.num_vertices();
    let resolved = match method {
        KappaMethodArg::Auto if exponent == 2.0 => KappaMethodArg::Eigen,
        KappaMethodArg::Auto if (2..=5).contains(&n) => KappaMethodArg::Brute,
        KappaMethodArg::Auto => KappaMethodArg::Optimize,
        explicit => explicit,
    };
    let (lower, upper) = match resolved {
        KappaMethodArg::Eigen => {
            if exponent != 2.0 {
                return Err(Failure::domain(format!(
                    "eigen bounds need p = 2; the side exponent here is {exponent}"
                )));
            }
            let value = dom(spectral::kappa2(graph))?;
            let bound = KappaBound {
                value,
                method: Method::Eigen,
            };
            (Some(bound), Some(bound))
        }
        KappaMethodArg::Brute => {
            let est = dom(kappa_p_brute(graph, exponent, mesh))?;
            (
                Some(KappaBound {
                    value: est.lower,
                    method: Method::Brute,
                }),
                Some(KappaBound {
                    value: est.upper,
                    method: Method::Brute,
                }),
            )
        }
        KappaMethodArg::Optimize => {
            let est = dom(kappa_p_optimize(graph, exponent, restarts, seed, tol))?;
            let lower = Some(KappaBound {
                value: est.lower,
                method: Method::Optimize,
            });
            // At p = 2 the optimizer's upper bound comes from the
            // eigensolver; elsewhere it is infinite and certifies nothing.
            let mut upper = est.upper.is_finite().then_some(KappaBound {
                value: est.upper,
                method: Method::Eigen,
            });
            if upper.is_none() && method == KappaMethodArg::Auto && exponent >= 2.0 {
                let stats = graph.stats();
                if stats.regular {
                    let kappa2 = dom(spectral::kappa2(graph))?;
                    let value = dom(kappa_p_interp_upper(
                        stats.deg_max,
                        stats.omega_e,
                        kappa2,
                        exponent,
                    ))?;
                    upper = Some(KappaBound {
                        value,
                        method: Method::Interp,
                    });
                }
            }
            (lower, upper)
        }
        KappaMethodArg::Interp => {
            let est = interp_estimate(graph, exponent)?;
            (
                None,
                Some(KappaBound {
                    value: est.upper,
                    method: Method::Interp,
                }),
            )
        }
        KappaMethodArg::Auto => unreachable!("auto resolves above"),
    };
    Ok(SideBounds {
        exponent,
        lower,
        upper,
    })
}

fn run_confdim(
    file: &Path,
    deg_min: Option<f64>,
    deg_max: Option<f64>,
    format: String,
) -> Result<Report, Failure> {
    let doc: GraphDocument = load(file)?;
    let graph = dom(doc.to_graph())?;
    let degree_bounds = deg_min.zip(deg_max);
    let bounds = dom(hyperbolic_p_bounds_for_graph(&graph, degree_bounds))?;
    let confdim_lower = dom(confdim_lower_bound(&bounds))?;
    let output = ConfdimOutput {
        bounds,
        confdim_lower,
    };
    Ok(Report {
        config: RunConfig {
            command: "confdim".into(),
            format,
            input: Some(path_str(file)),
            deg_min,
            deg_max,
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

fn run_plaplacian(
    file: &Path,
    p: f64,
    restarts: usize,
    seed: u64,
    format: String,
) -> Result<Report, Failure> {
    let doc: GraphDocument = load(file)?;
    let graph = dom(doc.to_graph())?;
    let result = dom(lambda1_p(&graph, p, restarts, seed))?;
    Ok(Report {
        config: RunConfig {
            command: "plaplacian".into(),
            format,
            input: Some(path_str(file)),
            p: Some(fmt_exponent(p)),
            restarts: Some(restarts),
            seed: Some(seed),
            ..Default::default()
        },
        result: to_result(&result)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cayley(
    file: &Path,
    link: &Path,
    check_bound: bool,
    p: f64,
    restarts: usize,
    seed: u64,
    out: Option<&Path>,
    format: String,
) -> Result<Report, Failure> {
    let group_doc: GroupDocument = load(file)?;
    let group = dom(group_doc.to_group())?;
    let link_doc: GraphDocument = load(link)?;
    let spec = dom(link_doc.to_spec())?;
    let link_graph = dom(link_doc.to_graph())?;
    let cayley = dom(cayley_graph(
        &group,
        &group_doc.images,
        &spec,
        link_graph.degrees(),
        link_graph.omega_e(),
    ))?;

    let (kappa_upper, bound) = if check_bound {
        let upper = link_upper_bound(&link_graph, p)?;
        let report = dom(check_quotient_bound(
            upper.value,
            &cayley,
            p,
            restarts,
            seed,
        ))?;
        (Some(upper), Some(report))
    } else {
        (None, None)
    };

    if let Some(path) = out {
        write_text(
            path,
            &to_canonical_json(&GraphDocument::from_graph(&cayley.graph)),
        )?;
    }

    let output = CayleyOutput {
        group_order: group.order(),
        generator_images: cayley.generator_images.clone(),
        stats: cayley.graph.stats(),
        kappa_p_upper: kappa_upper,
        bound,
    };
    Ok(Report {
        config: RunConfig {
            command: "cayley".into(),
            format,
            input: Some(path_str(file)),
            link: Some(path_str(link)),
            out: out.map(path_str),
            p: Some(fmt_exponent(p)),
            check_bound: Some(check_bound),
            restarts: Some(restarts),
            seed: Some(seed),
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

/// A certified upper bound for the link's kappa_p, chosen by what the
/// graph admits: exact at p = 2, exhaustive up to 5 vertices, norm
/// interpolation on regular graphs at p >= 2.
fn link_upper_bound(graph: &WeightedGraph, p: f64) -> Result<KappaBound, Failure> {
    if p == 2.0 {
        let value = dom(spectral::kappa2(graph))?;
        return Ok(KappaBound {
            value,
            method: Method::Eigen,
        });
    }
    let n = graph.num_vertices();
    if (2..=5).contains(&n) {
        let est = dom(kappa_p_brute(graph, p, DEFAULT_MESH))?;
        return Ok(KappaBound {
            value: est.upper,
            method: Method::Brute,
        });
    }
    let stats = graph.stats();
    if stats.regular && p >= 2.0 {
        let kappa2 = dom(spectral::kappa2(graph))?;
        let value = dom(kappa_p_interp_upper(
            stats.deg_max,
            stats.omega_e,
            kappa2,
            p,
        ))?;
        return Ok(KappaBound {
            value,
            method: Method::Interp,
        });
    }
    Err(Failure::domain(format!(
        "no certified upper bound for kappa_p at p = {p} on this link: \
         need p = 2, at most 5 vertices, or a regular graph with p >= 2"
    )))
}

fn run_link_graph(
    file: &Path,
    default_weight: f64,
    out: Option<&Path>,
    format: String,
) -> Result<Report, Failure> {
    let doc: GraphDocument = load(file)?;
    let spec = dom(doc.to_spec())?;
    let graph = dom(build_link_graph(&spec, default_weight))?;
    let admissibility = dom(verify_admissible(&spec, &graph))?;
    let document = GraphDocument::from_spec_and_graph(&spec, &graph);
    if let Some(path) = out {
        write_text(path, &to_canonical_json(&document))?;
    }
    let output = LinkGraphOutput {
        stats: graph.stats(),
        admissibility,
        document,
    };
    Ok(Report {
        config: RunConfig {
            command: "link-graph".into(),
            format,
            input: Some(path_str(file)),
            out: out.map(path_str),
            default_weight: Some(default_weight),
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

fn run_check_admissible(file: &Path, format: String) -> Result<Report, Failure> {
    let doc: GraphDocument = load(file)?;
    let spec = dom(doc.to_spec())?;
    let graph = dom(doc.to_graph())?;
    let admissibility = dom(verify_admissible(&spec, &graph))?;
    let output = AdmissibleOutput {
        stats: graph.stats(),
        admissibility,
    };
    Ok(Report {
        config: RunConfig {
            command: "check-admissible".into(),
            format,
            input: Some(path_str(file)),
            ..Default::default()
        },
        result: to_result(&output)?,
    })
}

// ---------------------------------------------------------------------------
// Files and parsing
// ---------------------------------------------------------------------------

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = read_text(path)?;
    linkcert_core::format::from_json(&text)
        .map_err(|e| Failure::io(format!("cannot parse {}: {e}", path.display())))
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Parses --p for `kappa`: a finite real or "inf"/"infinity" (f64 syntax).
fn parse_exponent(text: &str) -> Result<f64, Failure> {
    text.trim().parse().map_err(|_| {
        Failure::usage(format!(
            "invalid value '{text}' for --p: expected a real number or 'inf'"
        ))
    })
}

/// Echoes an exponent into the config: finite values print plainly, the
/// infinite one as "inf".
fn fmt_exponent(p: f64) -> String {
    if p == f64::INFINITY {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn method_arg_name(method: MethodArg) -> &'static str {
    match method {
        MethodArg::Eigen => "eigen",
        MethodArg::Optimize => "optimize",
        MethodArg::Brute => "brute",
        MethodArg::Interp => "interp",
        MethodArg::Path => "path",
    }
}

fn to_result<T: Serialize>(value: &T) -> Result<Value, Failure> {
    serde_json::to_value(value)
        .map_err(|e| Failure::domain(format!("cannot serialize the result: {e}")))
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Renders the report for printing. Structured mode is canonical JSON with
/// floats rounded to nine significant digits; human mode is an indented
/// tree at six. Both end with a newline and are byte-stable across reruns.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut value =
                serde_json::to_value(report).expect("the report envelope always serializes");
            round_floats(&mut value, STRUCTURED_SIG_DIGITS);
            to_canonical_json(&value)
        }
        Format::Human => render_human(report),
    }
}

/// Rounds x to `sig` significant digits through its shortest decimal form.
pub fn round_sig(x: f64, sig: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", sig - 1, x).parse().unwrap_or(x)
}

/// Recursively rounds every float in the tree; integers pass through.
fn round_floats(value: &mut Value, sig: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("is_f64 checked");
            if let Some(rounded) = serde_json::Number::from_f64(round_sig(x, sig)) {
                *value = Value::Number(rounded);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_floats(v, sig)),
        Value::Object(map) => map.values_mut().for_each(|v| round_floats(v, sig)),
        _ => {}
    }
}

fn fmt_f64(x: f64, sig: usize) -> String {
    let rounded = round_sig(x, sig);
    if rounded == 0.0 {
        return "0".into();
    }
    let magnitude = rounded.abs();
    if (1e-4..1e15).contains(&magnitude) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn scalar_repr(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if n.is_f64() => fmt_f64(x, HUMAN_SIG_DIGITS),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_human(report: &Report) -> String {
    let config = serde_json::to_value(&report.config).expect("config serializes");
    let mut out = String::new();
    out.push_str("config:\n");
    render_block(&mut out, &config, 1);
    out.push_str("result:\n");
    render_block(&mut out, &report.result, 1);
    out
}

/// Writes an object or array as an indented block (two spaces per level).
/// Scalar-only arrays render inline after their key; inside arrays, flat
/// objects render one per line, which keeps scan tables readable.
fn render_block(out: &mut String, value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if let Some(s) = scalar_repr(v) {
                    out.push_str(&format!("{pad}{key}: {s}\n"));
                } else if let Some(line) = inline_array(v) {
                    out.push_str(&format!("{pad}{key}: {line}\n"));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    render_block(out, v, indent + 1);
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                if let Some(s) = scalar_repr(v) {
                    out.push_str(&format!("{pad}- {s}\n"));
                } else if let Some(line) = inline_object(v) {
                    out.push_str(&format!("{pad}- {line}\n"));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    render_block(out, v, indent + 1);
                }
            }
        }
        scalar => {
            let s = scalar_repr(scalar).unwrap_or_default();
            out.push_str(&format!("{pad}{s}\n"));
        }
    }
}

/// Single-line form for an array whose items are all scalars.
fn inline_array(value: &Value) -> Option<String> {
    match value {
        Value::Array(items) => {
            let parts: Option<Vec<String>> = items.iter().map(scalar_repr).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        _ => None,
    }
}

/// Single-line form for an object whose values are all scalars.
fn inline_object(value: &Value) -> Option<String> {
    match value {
        Value::Object(map) => {
            if map.is_empty() {
                return Some("{}".into());
            }
            let parts: Option<Vec<String>> = map
                .iter()
                .map(|(k, v)| scalar_repr(v).map(|s| format!("{k}: {s}")))
                .collect();
            parts.map(|p| p.join(", "))
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
