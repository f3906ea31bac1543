//! Directed flag complexes, almost-simplex census and simplex closing
//! probabilities.

pub mod almost;
pub mod closing;
pub mod exec;
pub mod flag;
pub mod graph;
pub mod motif;
pub mod oracle;
pub mod report;
pub mod synth;

pub use almost::{count_all_ads, count_all_ads_with, AlmostSimplex, CensusCounts, DimensionCensus, RowKind};
pub use closing::{compute_p, compute_p_hat, compute_p_hat2, er_baseline, invert_p_hat, ClosingProfile, Rational};
pub use exec::Backend;
pub use flag::{build_flag_complex, build_flag_complex_with, FlagComplex, Simplex};
pub use graph::{
    disjoint_union, generate_er, parse_graph, serialize_graph, DirectedGraph, GraphError, GraphFormat, RngSeed,
};
pub use motif::{census_motifs, chance_level, MotifReport};
pub use report::{analyze, analyze_with, AnalysisReport, AnalyzeOptions};
pub use synth::{synthesize, synthesize_with, SynthesisOptions, SynthesisTarget};
