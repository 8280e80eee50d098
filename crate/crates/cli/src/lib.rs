//! Report types and command implementations behind the `polysym` binary.
//!
//! Every command returns a serializable report; the binary only parses
//! arguments, prints JSON and maps errors to exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use polysym::autgroup::automorphisms;
use polysym::coloring::{
    izmestiev_coloring, metric_coloring, orbit_coloring, product_coloring, Coloring, ColoringDocument, LabeledGraph,
};
use polysym::graph::EdgeGraph;
use polysym::izmestiev::{izmestiev_matrix, izmestiev_matrix_fd, verify_properties, IzmestievPropertyReport, MatrixDump};
use polysym::oracle::{brute_force_group, compare_groups, embedding_group, Candidates, ComparisonReport, Embedding};
use polysym::perm::Permutation;
use polysym::polytope::{edge_graph, enumerate_facets, GeometryDocument, Polytope};
use polysym::reconstruct::{eigenspace_criterion, realize_group, symmetry_coloring, EigenspaceReport, Flavor, MatrixGroup};
use polysym::tolerance::{SearchLimits, Tolerances};
use polysym::{Error, Result};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_PROPERTY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_THEOREM: u8 = 3;
pub const EXIT_LIMIT: u8 = 4;
pub const EXIT_NUMERIC: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Validation(_) | Error::Io(_) => EXIT_INPUT,
        Error::TheoremViolation(_) => EXIT_THEOREM,
        Error::LimitExceeded { .. } | Error::GraphTooLarge { .. } | Error::TooManyCandidates { .. } => EXIT_LIMIT,
        _ => EXIT_NUMERIC,
    }
}

/// Settings shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub tolerances: Tolerances,
    pub limits: SearchLimits,
    pub recenter: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ColoringKind {
    Izmestiev,
    Metric,
    Product,
    OrbitLinear,
    OrbitOrthogonal,
}

impl ColoringKind {
    pub const ALL: [ColoringKind; 5] = [
        ColoringKind::Izmestiev,
        ColoringKind::Metric,
        ColoringKind::Product,
        ColoringKind::OrbitLinear,
        ColoringKind::OrbitOrthogonal,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CandidateKind {
    /// Every permutation of the vertices.
    Sym,
    /// Automorphisms of the uncolored edge graph.
    GraphAuts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub vertices: usize,
    pub recentered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IzmestievSummary {
    pub spectrum: Vec<f64>,
    pub negative_eigenvalues: usize,
    pub kernel_dim: usize,
    pub matrix: MatrixDump,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ColoringSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub izmestiev: Option<ColoringDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<ColoringDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<ColoringDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_linear: Option<ColoringDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_orthogonal: Option<ColoringDocument>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Groups {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<MatrixGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orthogonal: Option<MatrixGroup>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputEcho,
    pub facets: usize,
    pub edges: Vec<[usize; 2]>,
    pub izmestiev: IzmestievSummary,
    pub properties: IzmestievPropertyReport,
    pub colorings: ColoringSet,
    pub groups: Groups,
    pub tolerances: Tolerances,
    pub limits: SearchLimits,
    /// Wall-clock milliseconds per stage; only present on request, since it
    /// would make reports differ between runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

fn read_document(path: &Path, opts: &Options) -> Result<GeometryDocument> {
    let doc = GeometryDocument::parse(&fs::read_to_string(path)?)?;
    Ok(if opts.recenter { doc.recentered() } else { doc })
}

/// Reads and validates a polytope, recentering first if requested.
pub fn load(path: &Path, opts: &Options) -> Result<(Polytope, InputEcho)> {
    let doc = read_document(path, opts)?;
    let p = Polytope::from_document(&doc, opts.tolerances)?;
    let echo = InputEcho {
        path: path.display().to_string(),
        name: doc.name,
        dimension: p.dim(),
        vertices: p.n(),
        recentered: opts.recenter,
    };
    Ok((p, echo))
}

fn edge_list(graph: &EdgeGraph) -> Vec<[usize; 2]> {
    graph.edges().iter().map(|&(i, j)| [i, j]).collect()
}

struct Stopwatch {
    enabled: bool,
    last: Instant,
    laps: BTreeMap<String, f64>,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch {
            enabled,
            last: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        if self.enabled {
            self.laps.insert(stage.to_string(), (now - self.last).as_secs_f64() * 1e3);
        }
        self.last = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub colorings: Vec<ColoringKind>,
    pub flavors: Vec<Flavor>,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            colorings: ColoringKind::ALL.to_vec(),
            flavors: vec![Flavor::Linear, Flavor::Orthogonal],
            timing: false,
        }
    }
}

pub fn analyze(path: &Path, opts: &Options, what: &AnalyzeOptions) -> Result<AnalysisReport> {
    let mut clock = Stopwatch::new(what.timing);
    let (p, input) = load(path, opts)?;
    clock.lap("load");
    let facets = enumerate_facets(&p)?;
    let graph = edge_graph(&p, &facets);
    clock.lap("facets");
    let m = izmestiev_matrix(&p, &facets, &graph)?;
    let properties = verify_properties(&m.entries, &graph, &p)?;
    clock.lap("izmestiev");

    let mut groups = Groups::default();
    let mut orbit = BTreeMap::new();
    for &flavor in &what.flavors {
        let labeled = symmetry_coloring(&p, &m, flavor)?;
        let perms = automorphisms(&labeled, &opts.limits)?;
        let group = realize_group(&p, &perms, flavor)?;
        orbit.insert(flavor, orbit_coloring(&graph, &perms)?.document());
        match flavor {
            Flavor::Linear => groups.linear = Some(group),
            Flavor::Orthogonal => groups.orthogonal = Some(group),
        }
        clock.lap(flavor.name());
    }

    let eps = opts.tolerances.color;
    let iz = izmestiev_coloring(&m, eps)?;
    let me = metric_coloring(&p, &graph, eps)?;
    let wanted = |k: ColoringKind| what.colorings.contains(&k);
    let colorings = ColoringSet {
        izmestiev: wanted(ColoringKind::Izmestiev).then(|| iz.document()),
        metric: wanted(ColoringKind::Metric).then(|| me.document()),
        product: wanted(ColoringKind::Product).then(|| product_coloring(&iz, &me).map(|c| c.document())).transpose()?,
        orbit_linear: orbit.remove(&Flavor::Linear).filter(|_| wanted(ColoringKind::OrbitLinear)),
        orbit_orthogonal: orbit.remove(&Flavor::Orthogonal).filter(|_| wanted(ColoringKind::OrbitOrthogonal)),
    };
    clock.lap("colorings");

    let spectrum = properties.spectrum.clone();
    Ok(AnalysisReport {
        input,
        facets: facets.len(),
        edges: edge_list(&graph),
        izmestiev: IzmestievSummary {
            spectrum,
            negative_eigenvalues: properties.negative_eigenvalues,
            kernel_dim: properties.kernel_dim,
            matrix: m.dump(),
        },
        properties,
        colorings,
        groups,
        tolerances: opts.tolerances,
        limits: opts.limits,
        timing: clock.finish(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteDifferenceCheck {
    pub step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_diff: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub input: InputEcho,
    /// `"closed-form"` or the path of a matrix dump.
    pub matrix_source: String,
    pub properties: IzmestievPropertyReport,
    pub eigenspace: EigenspaceReport,
    pub finite_difference: FiniteDifferenceCheck,
    pub pass: bool,
    pub tolerances: Tolerances,
}

/// Checks the Izmestiev properties, the eigenspace criterion and agreement
/// with finite differences, for the closed-form matrix or a supplied dump.
pub fn validate(path: &Path, opts: &Options, matrix: Option<&Path>) -> Result<ValidationReport> {
    let (p, input) = load(path, opts)?;
    let facets = enumerate_facets(&p)?;
    let graph = edge_graph(&p, &facets);
    let (m, matrix_source) = match matrix {
        Some(file) => {
            let dump: MatrixDump = serde_json::from_str(&fs::read_to_string(file)?)?;
            (dump.to_matrix()?, file.display().to_string())
        }
        None => (izmestiev_matrix(&p, &facets, &graph)?.entries, "closed-form".to_string()),
    };
    let properties = verify_properties(&m, &graph, &p)?;
    let eigenspace = eigenspace_criterion(&m, p.phi(), opts.tolerances.kern)?;
    let step = opts.tolerances.fd_step;
    let tolerance = opts.tolerances.fd_agree * m.amax().max(1.0);
    let finite_difference = match izmestiev_matrix_fd(&p, &graph, step) {
        Ok(fd) => {
            let diff = (&fd.entries - &m).amax();
            FiniteDifferenceCheck {
                step,
                max_diff: Some(diff),
                tolerance,
                error: None,
                pass: diff <= tolerance,
            }
        }
        Err(e) => FiniteDifferenceCheck {
            step,
            max_diff: None,
            tolerance,
            error: Some(e.to_string()),
            pass: false,
        },
    };
    let pass = properties.pass && eigenspace.pass && finite_difference.pass;
    Ok(ValidationReport {
        input,
        matrix_source,
        properties,
        eigenspace,
        finite_difference,
        pass,
        tolerances: opts.tolerances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub input: InputEcho,
    pub candidates: String,
    pub candidate_count: usize,
    pub group: MatrixGroup,
    /// Pipeline group of the same flavor against the oracle; polytopes only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<ComparisonReport>,
}

/// Brute-force symmetry group, for a polytope or (with `embedding`) for an
/// arbitrary embedded graph given by a document with an `edges` list.
pub fn oracle(path: &Path, opts: &Options, flavor: Flavor, kind: CandidateKind, embedding: bool) -> Result<OracleReport> {
    let doc = read_document(path, opts)?;
    let echo = |dimension: usize, vertices: usize| InputEcho {
        path: path.display().to_string(),
        name: doc.name.clone(),
        dimension,
        vertices,
        recentered: opts.recenter,
    };
    let candidates_for = |graph: &EdgeGraph| -> Result<(Candidates, usize)> {
        Ok(match kind {
            CandidateKind::Sym => (Candidates::Symmetric, (1..=graph.n()).product()),
            CandidateKind::GraphAuts => {
                let auts = automorphisms(&LabeledGraph::uncolored(graph.clone()), &opts.limits)?;
                let count = auts.order();
                (Candidates::Given(auts.elements().to_vec()), count)
            }
        })
    };
    let name = match kind {
        CandidateKind::Sym => "sym",
        CandidateKind::GraphAuts => "graph-auts",
    };
    if embedding {
        let e = Embedding::from_document(&doc)?;
        let (candidates, candidate_count) = candidates_for(&e.graph)?;
        let group = embedding_group(&e, &candidates, flavor, &opts.tolerances)?;
        return Ok(OracleReport {
            input: echo(e.coordinates.nrows(), e.coordinates.ncols()),
            candidates: name.into(),
            candidate_count,
            group,
            comparison: None,
        });
    }
    let p = Polytope::from_document(&doc, opts.tolerances)?;
    let facets = enumerate_facets(&p)?;
    let graph = edge_graph(&p, &facets);
    let (candidates, candidate_count) = candidates_for(&graph)?;
    let group = brute_force_group(p.phi(), &candidates, flavor, &opts.tolerances)?;
    let m = izmestiev_matrix(&p, &facets, &graph)?;
    let perms = automorphisms(&symmetry_coloring(&p, &m, flavor)?, &opts.limits)?;
    let pipeline = realize_group(&p, &perms, flavor)?;
    let comparison = compare_groups(&pipeline, &group, opts.tolerances.matching);
    Ok(OracleReport {
        input: echo(p.dim(), p.n()),
        candidates: name.into(),
        candidate_count,
        group,
        comparison: Some(comparison),
    })
}

/// Graphviz text of the edge graph under one coloring.
pub fn export_dot(path: &Path, opts: &Options, kind: ColoringKind) -> Result<String> {
    let (p, input) = load(path, opts)?;
    let facets = enumerate_facets(&p)?;
    let graph = edge_graph(&p, &facets);
    let m = izmestiev_matrix(&p, &facets, &graph)?;
    let eps = opts.tolerances.color;
    let orbit = |flavor: Flavor| -> Result<Coloring> {
        let perms = automorphisms(&symmetry_coloring(&p, &m, flavor)?, &opts.limits)?;
        orbit_coloring(&graph, &perms)
    };
    let coloring = match kind {
        ColoringKind::Izmestiev => izmestiev_coloring(&m, eps)?,
        ColoringKind::Metric => metric_coloring(&p, &graph, eps)?,
        ColoringKind::Product => product_coloring(&izmestiev_coloring(&m, eps)?, &metric_coloring(&p, &graph, eps)?)?,
        ColoringKind::OrbitLinear => orbit(Flavor::Linear)?,
        ColoringKind::OrbitOrthogonal => orbit(Flavor::Orthogonal)?,
    };
    let name = input.name.unwrap_or_else(|| "polytope".into());
    Ok(LabeledGraph::new(graph, coloring)?.to_dot(&name))
}

/// Does the metric coloring alone capture the orthogonal symmetries? The
/// answer for one polytope, without asserting anything in general.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricExperiment {
    pub input: InputEcho,
    pub metric_coloring: ColoringDocument,
    pub metric_automorphisms: usize,
    pub orthogonal_symmetries: usize,
    pub captured: bool,
    /// Automorphisms of the metric-colored graph with no orthogonal realization.
    pub unrealized: Vec<Permutation>,
    /// Orthogonal symmetries that do not preserve the metric coloring.
    pub missing: Vec<Permutation>,
}

pub fn experiment_metric(path: &Path, opts: &Options) -> Result<MetricExperiment> {
    let (p, input) = load(path, opts)?;
    let facets = enumerate_facets(&p)?;
    let graph = edge_graph(&p, &facets);
    let coloring = metric_coloring(&p, &graph, opts.tolerances.color)?;
    let document = coloring.document();
    let metric = automorphisms(&LabeledGraph::new(graph.clone(), coloring)?, &opts.limits)?;
    let graph_auts = automorphisms(&LabeledGraph::uncolored(graph), &opts.limits)?;
    let truth = brute_force_group(
        p.phi(),
        &Candidates::Given(graph_auts.elements().to_vec()),
        Flavor::Orthogonal,
        &opts.tolerances,
    )?;
    let truth_perms: Vec<Permutation> = truth.elements.iter().map(|e| e.perm.clone()).collect();
    let unrealized: Vec<Permutation> = metric
        .elements()
        .iter()
        .filter(|s| truth_perms.binary_search(s).is_err())
        .cloned()
        .collect();
    let missing: Vec<Permutation> = truth_perms.iter().filter(|s| !metric.contains(s)).cloned().collect();
    Ok(MetricExperiment {
        input,
        metric_coloring: document,
        metric_automorphisms: metric.order(),
        orthogonal_symmetries: truth.order,
        captured: unrealized.is_empty() && missing.is_empty(),
        unrealized,
        missing,
    })
}

/// One-paragraph human summary of an analysis, for `--verbose`.
pub fn summary(r: &AnalysisReport) -> String {
    let name = r.input.name.as_deref().unwrap_or(&r.input.path);
    let mut out = format!(
        "{name}: d = {}, {} vertices, {} facets, {} edges\n  Izmestiev matrix: {} negative eigenvalue(s), kernel dimension {}, properties {}\n",
        r.input.dimension,
        r.input.vertices,
        r.facets,
        r.edges.len(),
        r.izmestiev.negative_eigenvalues,
        r.izmestiev.kernel_dim,
        if r.properties.pass { "pass" } else { "FAIL" }
    );
    for (label, g) in [("linear", &r.groups.linear), ("orthogonal", &r.groups.orthogonal)] {
        if let Some(g) = g {
            out.push_str(&format!("  {label} symmetry group: order {}\n", g.order));
        }
    }
    out
}
