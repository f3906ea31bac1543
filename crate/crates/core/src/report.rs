//! Versioned JSON and CSV reports.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::almost::{count_all_ads_with, CensusCounts, RowKind};
use crate::closing::{er_baseline_with, BaselineError, BaselineReport, ClosingProfile, Rational, Stat};
use crate::exec::Backend;
use crate::flag::build_flag_complex_with;
use crate::graph::{DirectedGraph, RngSeed};
use crate::motif::{census_motifs_with, MotifCounts, MotifKind, MotifReport};
use num_traits::ToPrimitive;

pub const SCHEMA: &str = "simplicia/1";
pub const TOOL: &str = "simplicia";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error("motif census disagrees with almost-simplex census: {motifs} from motifs, {census} almost-2-simplices")]
    Inconsistent { motifs: u64, census: u64 },
}

fn float(x: f64) -> Option<Box<RawValue>> {
    x.is_finite().then(|| RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON"))
}

struct Rat<'a>(&'a Rational);

impl Serialize for Rat<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rational", 3)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.serialize_field("float", &self.0.to_f64().and_then(float))?;
        st.end()
    }
}

fn rat(r: Option<&Rational>) -> Option<Rat<'_>> {
    r.map(Rat)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputInfo {
    pub path: Option<String>,
    pub vertices: u64,
    pub edges: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_dim: Option<usize>,
    /// Number of matched ER replicates; none when absent.
    pub baseline: Option<usize>,
    pub motifs: bool,
    pub seed: u64,
    pub strict_motifs: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub input: InputInfo,
    pub max_dim_cap: Option<usize>,
    pub counts: CensusCounts,
    pub profile: ClosingProfile,
    pub baseline: Option<BaselineReport>,
    pub motifs: Option<MotifSection>,
    /// Seconds; only serialized when set.
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifSection {
    pub report: MotifReport,
    pub strict: bool,
    pub almost_two_simplices: u64,
}

/// Runs the motif census and checks it against the almost-2-simplex count.
pub fn motif_section(g: &DirectedGraph, strict: bool, backend: Backend) -> Result<MotifSection, ReportError> {
    let report = census_motifs_with(g, backend);
    let counts = count_all_ads_with(g, &build_flag_complex_with(g, Some(1), backend), backend);
    let census = counts.row(2).map_or(0, |r| r.almost);
    let motifs = report.almost_two_simplices();
    if motifs != census {
        return Err(ReportError::Inconsistent { motifs, census });
    }
    Ok(MotifSection { report, strict, almost_two_simplices: census })
}

pub fn analyze(g: &DirectedGraph, path: Option<&str>, opts: &AnalyzeOptions) -> Result<AnalysisReport, ReportError> {
    analyze_with(g, path, opts, Backend::default())
}

pub fn analyze_with(
    g: &DirectedGraph,
    path: Option<&str>,
    opts: &AnalyzeOptions,
    backend: Backend,
) -> Result<AnalysisReport, ReportError> {
    let complex = build_flag_complex_with(g, opts.max_dim, backend);
    let counts = count_all_ads_with(g, &complex, backend);
    let profile = ClosingProfile::from_counts(&counts);
    let baseline =
        opts.baseline.map(|r| er_baseline_with(g, r, RngSeed(opts.seed), opts.max_dim, backend)).transpose()?;
    let motifs = opts.motifs.then(|| motif_section(g, opts.strict_motifs, backend)).transpose()?;
    Ok(AnalysisReport {
        input: InputInfo {
            path: path.map(str::to_owned),
            vertices: g.vertex_count() as u64,
            edges: g.edge_count() as u64,
        },
        max_dim_cap: opts.max_dim,
        counts,
        profile,
        baseline,
        motifs,
        wall_time: None,
    })
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

const TOOL_INFO: Tool = Tool { name: TOOL, version: VERSION };

#[derive(Serialize)]
struct InputJson<'a> {
    path: Option<&'a str>,
    vertices: u64,
    edges: u64,
}

impl<'a> From<&'a InputInfo> for InputJson<'a> {
    fn from(i: &'a InputInfo) -> Self {
        InputJson { path: i.path.as_deref(), vertices: i.vertices, edges: i.edges }
    }
}

#[derive(Serialize)]
struct RowJson<'a> {
    d: usize,
    kind: RowKind,
    simplices: Option<u64>,
    almost: u64,
    completed: u64,
    rejected_pairs: u64,
    p: Option<Rat<'a>>,
    p_hat: Option<Rat<'a>>,
    p_hat2: Option<Rat<'a>>,
}

#[derive(Serialize)]
struct StatJson<'a> {
    samples: usize,
    mean: Option<Rat<'a>>,
    variance: Option<Rat<'a>>,
    std: Option<Box<RawValue>>,
    std_err: Option<Box<RawValue>>,
}

impl<'a> From<&'a Stat> for StatJson<'a> {
    fn from(s: &'a Stat) -> Self {
        StatJson {
            samples: s.samples,
            mean: rat(s.mean.as_ref()),
            variance: rat(s.variance.as_ref()),
            std: s.std().and_then(float),
            std_err: s.std_err().and_then(float),
        }
    }
}

#[derive(Serialize)]
struct BaselineRowJson<'a> {
    d: usize,
    simplices: StatJson<'a>,
    p: StatJson<'a>,
    p_hat: StatJson<'a>,
}

#[derive(Serialize)]
struct BaselineJson<'a> {
    replicates: usize,
    seed: u64,
    seeds: &'a [u64],
    vertices: u64,
    edges: u64,
    rows: Vec<BaselineRowJson<'a>>,
}

impl<'a> From<&'a BaselineReport> for BaselineJson<'a> {
    fn from(b: &'a BaselineReport) -> Self {
        BaselineJson {
            replicates: b.replicates,
            seed: b.master_seed,
            seeds: &b.seeds,
            vertices: b.vertices,
            edges: b.edges,
            rows: b
                .rows
                .iter()
                .map(|r| BaselineRowJson {
                    d: r.dim,
                    simplices: (&r.simplices).into(),
                    p: (&r.p).into(),
                    p_hat: (&r.p_hat).into(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct MotifJson {
    total: u64,
    completed: u64,
    strict_total: u64,
    strict_completed: u64,
    ratio: Option<RatOwned>,
    strict_ratio: Option<RatOwned>,
    primary_ratio: Option<RatOwned>,
}

struct RatOwned(Rational);

impl Serialize for RatOwned {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Rat(&self.0).serialize(s)
    }
}

impl MotifJson {
    fn new(c: &MotifCounts, strict: bool) -> Self {
        let (ratio, strict_ratio) = (c.ratio().map(RatOwned), c.strict_ratio().map(RatOwned));
        let primary_ratio = if strict { c.strict_ratio() } else { c.ratio() }.map(RatOwned);
        MotifJson {
            total: c.total,
            completed: c.completed,
            strict_total: c.strict_total,
            strict_completed: c.strict_completed,
            ratio,
            strict_ratio,
            primary_ratio,
        }
    }
}

#[derive(Serialize)]
struct MotifsJson<'a> {
    selection: &'static str,
    divergent: MotifJson,
    chain: MotifJson,
    convergent: MotifJson,
    almost_two_simplices: u64,
    edge_density: Option<Rat<'a>>,
    chance_level: Option<Rat<'a>>,
}

impl<'a> From<&'a MotifSection> for MotifsJson<'a> {
    fn from(m: &'a MotifSection) -> Self {
        let kind = |k: MotifKind| MotifJson::new(m.report.get(k), m.strict);
        MotifsJson {
            selection: if m.strict { "strict" } else { "all" },
            divergent: kind(MotifKind::Divergent),
            chain: kind(MotifKind::Chain),
            convergent: kind(MotifKind::Convergent),
            almost_two_simplices: m.almost_two_simplices,
            edge_density: rat(m.report.edge_density.as_ref()),
            chance_level: rat(m.report.chance_level.as_ref()),
        }
    }
}

#[derive(Serialize)]
struct AnalysisJson<'a> {
    schema: &'static str,
    tool: Tool,
    input: InputJson<'a>,
    max_dim_cap: Option<usize>,
    max_dim: Option<usize>,
    truncated: bool,
    dimensions: Vec<RowJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    baseline: Option<BaselineJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    motifs: Option<MotifsJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<Box<RawValue>>,
}

#[derive(Serialize)]
struct MotifDocJson<'a> {
    schema: &'static str,
    tool: Tool,
    input: InputJson<'a>,
    motifs: MotifsJson<'a>,
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let p = &self.profile;
        let dimensions = self
            .counts
            .rows
            .iter()
            .enumerate()
            .map(|(k, r)| RowJson {
                d: r.dim,
                kind: r.kind,
                simplices: r.simplices,
                almost: r.almost,
                completed: r.completed,
                rejected_pairs: r.rejected_pairs,
                p: rat(p.p[k].as_ref()),
                p_hat: rat(p.p_hat[k].as_ref()),
                p_hat2: rat(p.p_hat2[k].as_ref()),
            })
            .collect();
        pretty(&AnalysisJson {
            schema: SCHEMA,
            tool: TOOL_INFO,
            input: (&self.input).into(),
            max_dim_cap: self.max_dim_cap,
            max_dim: p.max_dim,
            truncated: self.counts.truncated,
            dimensions,
            baseline: self.baseline.as_ref().map(Into::into),
            motifs: self.motifs.as_ref().map(Into::into),
            wall_time_s: self.wall_time.and_then(float),
        })
    }

    /// The per-dimension table only; rationals as `num/den`, undefined empty.
    pub fn to_csv(&self) -> String {
        let cell = |r: &Option<Rational>| r.as_ref().map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from("d,kind,simplices,almost,completed,rejected_pairs,p,p_hat,p_hat2\n");
        for (k, r) in self.counts.rows.iter().enumerate() {
            let kind = match r.kind {
                RowKind::Regular => "regular",
                RowKind::BeyondTop => "beyond_top",
                RowKind::CapAdjacent => "cap_adjacent",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.dim,
                kind,
                r.simplices.map(|n| n.to_string()).unwrap_or_default(),
                r.almost,
                r.completed,
                r.rejected_pairs,
                cell(&self.profile.p[k]),
                cell(&self.profile.p_hat[k]),
                cell(&self.profile.p_hat2[k]),
            ));
        }
        out
    }
}

/// Stand-alone motif report.
pub fn motif_json(input: &InputInfo, section: &MotifSection) -> String {
    pretty(&MotifDocJson { schema: SCHEMA, tool: TOOL_INFO, input: input.into(), motifs: section.into() })
}
