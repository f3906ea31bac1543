//! Graphs with a prescribed completion-probability vector.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::almost::count_all_ads_with;
use crate::closing::{compute_p, Rational};
use crate::exec::Backend;
use crate::flag::build_flag_complex_with;
use crate::graph::{generate_er, DirectedGraph, GraphBuilder, RngSeed, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("no construction found within {bound} vertices")]
    Infeasible { bound: usize },
    #[error("gadget dimension {0} out of range (expected at least 2)")]
    DimensionOutOfRange(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Complete digraph on `d + 1` vertices.
    Closed,
    /// A directed d-simplex without its edge `(v_0, v_d)`.
    Open,
}

impl GadgetKind {
    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Closed => "closed",
            GadgetKind::Open => "open",
        }
    }
}

pub fn gadget(kind: GadgetKind, d: usize) -> Result<DirectedGraph, SynthError> {
    if d < 2 {
        return Err(SynthError::DimensionOutOfRange(d));
    }
    let n = d as Vertex + 1;
    let edges: Vec<(Vertex, Vertex)> = match kind {
        GadgetKind::Closed => (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect(),
        GadgetKind::Open => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&e| e != (0, n - 1)).collect(),
    };
    Ok(DirectedGraph::from_edges(n as usize, edges).expect("gadget edges are valid"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetStats {
    pub kind: GadgetKind,
    pub dim: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `(completed, total)` almost-simplices for `d = 1..`.
    pub rows: Vec<(u64, u64)>,
}

impl GadgetStats {
    pub fn at(&self, d: usize) -> (u64, u64) {
        d.checked_sub(1).and_then(|k| self.rows.get(k)).copied().unwrap_or((0, 0))
    }
}

pub fn measure_gadget(kind: GadgetKind, d: usize) -> Result<GadgetStats, SynthError> {
    let g = gadget(kind, d)?;
    let counts = count_all_ads_with(&g, &build_flag_complex_with(&g, None, Backend::Sequential), Backend::Sequential);
    Ok(GadgetStats {
        kind,
        dim: d,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        rows: counts.rows.iter().map(|r| (r.completed, r.almost)).collect(),
    })
}

/// Target `p*_1..p*_D`, each strictly inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisTarget(Vec<Rational>);

impl SynthesisTarget {
    pub fn new(values: Vec<Rational>) -> Result<Self, SynthError> {
        if values.is_empty() {
            return Err(SynthError::InvalidTarget("empty target".into()));
        }
        if let Some(v) = values.iter().find(|v| **v <= Rational::zero() || **v >= Rational::one()) {
            return Err(SynthError::InvalidTarget(format!("{v} is not strictly between 0 and 1")));
        }
        Ok(SynthesisTarget(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

impl FromStr for SynthesisTarget {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<Rational>()
                    .map_err(|_| SynthError::InvalidTarget(format!("cannot parse '{}'", t.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SynthesisTarget::new(values)
    }
}

impl fmt::Display for SynthesisTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Largest graph either strategy may produce.
    pub max_vertices: usize,
    /// Annealing steps per candidate vertex count.
    pub search_steps: usize,
    pub seed: RngSeed,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions { max_vertices: 100_000, search_steps: 60_000, seed: RngSeed(0) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Any graph of the right density.
    Density,
    /// Disjoint closed and open gadgets plus dimension-1 padding.
    Gadgets,
    /// Annealed edge swaps at a fixed edge count.
    Search,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Density => "density",
            Method::Gadgets => "gadgets",
            Method::Search => "search",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesized {
    pub graph: DirectedGraph,
    pub method: Method,
}

/// Whether `p_1..p_D` of `g` equals the target exactly.
pub fn realizes(g: &DirectedGraph, target: &SynthesisTarget) -> bool {
    let counts = count_all_ads_with(g, &build_flag_complex_with(g, None, Backend::default()), Backend::default());
    let p = compute_p(&counts);
    target.values().iter().enumerate().all(|(k, t)| p.get(k).and_then(Option::as_ref) == Some(t))
}

pub fn synthesize(target: &SynthesisTarget) -> Result<Synthesized, SynthError> {
    synthesize_with(target, &SynthesisOptions::default())
}

type Builder = fn(&SynthesisTarget, &SynthesisOptions) -> Option<DirectedGraph>;

pub fn synthesize_with(target: &SynthesisTarget, opts: &SynthesisOptions) -> Result<Synthesized, SynthError> {
    let attempts: [(Method, Builder); 3] =
        [(Method::Density, by_density), (Method::Gadgets, by_gadgets), (Method::Search, by_search)];
    for (method, build) in attempts {
        if let Some(graph) = build(target, opts) {
            if graph.vertex_count() <= opts.max_vertices && realizes(&graph, target) {
                return Ok(Synthesized { graph, method });
            }
        }
    }
    Err(SynthError::Infeasible { bound: opts.max_vertices })
}

fn parts(r: &Rational) -> Option<(u128, u128)> {
    Some((r.numer().to_u128()?, r.denom().to_u128()?))
}

/// Smallest `n ≥ 2` with an integral edge count `x n(n-1) / y`.
fn density_order(x: u128, y: u128, bound: usize) -> Option<(usize, usize)> {
    (2..=bound as u128)
        .find(|n| (x * n * (n - 1)).is_multiple_of(y))
        .map(|n| (n as usize, (x * n * (n - 1) / y) as usize))
}

fn by_density(target: &SynthesisTarget, opts: &SynthesisOptions) -> Option<DirectedGraph> {
    if target.dim() != 1 {
        return None;
    }
    let (x, y) = parts(&target.values()[0])?;
    let (n, m) = density_order(x, y, opts.max_vertices)?;
    generate_er(n, m, opts.seed).ok()
}

struct Plan {
    pieces: Vec<(GadgetKind, usize, u128)>,
    vertices: u128,
    edges: u128,
    /// `(completed, total)` per dimension, index `d - 1`.
    counts: Vec<(u128, u128)>,
}

impl Plan {
    fn add(&mut self, stats: &GadgetStats, copies: u128) {
        if copies == 0 {
            return;
        }
        self.pieces.push((stats.kind, stats.dim, copies));
        self.vertices += copies * stats.vertex_count as u128;
        self.edges += copies * stats.edge_count as u128;
        for (k, c) in self.counts.iter_mut().enumerate() {
            let (a, b) = stats.at(k + 1);
            c.0 += copies * a as u128;
            c.1 += copies * b as u128;
        }
    }

    fn replicate(&mut self, k: u128) {
        for p in &mut self.pieces {
            p.2 *= k;
        }
        self.vertices *= k;
        self.edges *= k;
        for c in &mut self.counts {
            c.0 *= k;
            c.1 *= k;
        }
    }
}

/// Smallest `m ≥ 1` making `m x - a` a multiple of `big_a` and
/// `m (y - x) - (b - a)` a multiple of `t`, both non-negative.
fn multiplier(x: u128, y: u128, a: u128, b: u128, big_a: u128, t: u128) -> Option<u128> {
    let lo = a.div_ceil(x).max((b - a).div_ceil(y - x)).max(1);
    (lo..lo + big_a * t).find(|&m| (m * x - a).is_multiple_of(big_a) && (m * (y - x) - (b - a)).is_multiple_of(t))
}

fn by_gadgets(target: &SynthesisTarget, opts: &SynthesisOptions) -> Option<DirectedGraph> {
    let dim = target.dim();
    if dim < 2 {
        return None;
    }
    let bound = opts.max_vertices as u128;
    let mut plan = Plan { pieces: Vec::new(), vertices: 0, edges: 0, counts: vec![(0, 0); dim] };
    for d in (2..=dim).rev() {
        let (x, y) = parts(&target.values()[d - 1])?;
        let closed = measure_gadget(GadgetKind::Closed, d).ok()?;
        let open = measure_gadget(GadgetKind::Open, d).ok()?;
        let (ca, big_a) = closed.at(d);
        let (oa, t) = open.at(d);
        if ca != big_a || oa != 0 || t == 0 {
            return None;
        }
        let (big_a, t) = (big_a as u128, t as u128);
        let m = loop {
            let (a, b) = plan.counts[d - 1];
            if let Some(m) = multiplier(x, y, a, b, big_a, t) {
                break m;
            }
            let k = (2..=big_a * t).find(|&k| multiplier(x, y, a * k, b * k, big_a, t).is_some())?;
            plan.replicate(k);
            if plan.vertices > bound {
                return None;
            }
        };
        let (a, b) = plan.counts[d - 1];
        plan.add(&closed, (m * x - a) / big_a);
        plan.add(&open, (m * (y - x) - (b - a)) / t);
        if plan.vertices > bound {
            return None;
        }
    }
    let (x, y) = parts(&target.values()[0])?;
    let (pad_to, extra) = (plan.vertices.max(2)..=bound).find_map(|n| {
        let pairs = n * (n - 1) * x;
        if pairs % y != 0 {
            return None;
        }
        let want = pairs / y;
        let room = 2 * ((n - plan.vertices) / 2);
        (want >= plan.edges && want - plan.edges <= room).then_some((n, want - plan.edges))
    })?;
    let mut b = GraphBuilder::new(pad_to as usize);
    let mut base: Vertex = 0;
    for &(kind, d, copies) in &plan.pieces {
        let g = gadget(kind, d).ok()?;
        for _ in 0..copies {
            for (u, v) in g.edges() {
                b.add_edge(base + u, base + v).ok()?;
            }
            base += g.vertex_count() as Vertex;
        }
    }
    let mut left = extra;
    while left > 0 {
        b.add_edge(base, base + 1).ok()?;
        if left >= 2 {
            b.add_edge(base + 1, base).ok()?;
        }
        left = left.saturating_sub(2);
        base += 2;
    }
    Some(b.finish())
}

fn objective(g: &DirectedGraph, targets: &[f64]) -> f64 {
    let dim = targets.len();
    let c = build_flag_complex_with(g, Some(dim - 1), Backend::Sequential);
    let counts = count_all_ads_with(g, &c, Backend::Sequential);
    (2..=dim)
        .map(|d| match counts.row(d) {
            Some(r) if r.almost > 0 => (r.completed as f64 / r.almost as f64 - targets[d - 1]).abs(),
            _ => 1.0 + targets[d - 1],
        })
        .sum()
}

/// Anneals edge swaps over small graphs whose vertex count admits the target
/// density exactly, then checks the candidate with exact arithmetic.
fn by_search(target: &SynthesisTarget, opts: &SynthesisOptions) -> Option<DirectedGraph> {
    let dim = target.dim();
    if dim < 2 {
        return None;
    }
    let (x, y) = parts(&target.values()[0])?;
    let goals: Vec<f64> = target.values().iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
    let mut rng = opts.seed.rng();
    let limit = opts.max_vertices.min(40);
    for n in (dim + 1).max(3)..=limit {
        let pairs = (n * (n - 1)) as u128;
        if !(pairs * x).is_multiple_of(y) {
            continue;
        }
        let m = (pairs * x / y) as usize;
        let mut all: Vec<(Vertex, Vertex)> =
            (0..n as Vertex).flat_map(|u| (0..n as Vertex).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        all.shuffle(&mut rng);
        let (mut present, mut absent) = (all[..m].to_vec(), all[m..].to_vec());
        if present.is_empty() || absent.is_empty() {
            continue;
        }
        let build = |es: &[(Vertex, Vertex)]| DirectedGraph::from_edges(n, es.iter().copied()).expect("distinct pairs");
        let mut g = build(&present);
        let mut cost = objective(&g, &goals);
        let steps = opts.search_steps.max(1);
        let (hot, cold) = (0.05f64, 1e-4f64);
        for step in 0..steps {
            if cost < 1e-12 && realizes(&g, target) {
                return Some(g);
            }
            let temp = hot * (cold / hot).powf(step as f64 / steps as f64);
            let (i, j) = (rng.gen_range(0..present.len()), rng.gen_range(0..absent.len()));
            std::mem::swap(&mut present[i], &mut absent[j]);
            let h = build(&present);
            let c = objective(&h, &goals);
            if c <= cost || rng.gen::<f64>() < ((cost - c) / temp).exp() {
                g = h;
                cost = c;
            } else {
                std::mem::swap(&mut present[i], &mut absent[j]);
            }
        }
        if cost < 1e-12 && realizes(&g, target) {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almost::count_all_ads;
    use crate::closing::ratio;
    use crate::flag::build_flag_complex;
    use crate::graph::disjoint_union;

    fn target(s: &str) -> SynthesisTarget {
        s.parse().unwrap()
    }

    #[test]
    fn gadget_shapes() {
        assert_eq!(gadget(GadgetKind::Open, 2).unwrap().edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(
            gadget(GadgetKind::Open, 3).unwrap().edges().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(gadget(GadgetKind::Closed, 2).unwrap().edge_count(), 6);
        assert_eq!(gadget(GadgetKind::Closed, 1), Err(SynthError::DimensionOutOfRange(1)));
    }

    #[test]
    fn gadget_contributions() {
        let o2 = measure_gadget(GadgetKind::Open, 2).unwrap();
        assert_eq!((o2.at(1), o2.at(2)), ((2, 6), (0, 1)));
        assert_eq!(measure_gadget(GadgetKind::Closed, 2).unwrap().at(2), (18, 18));
        assert_eq!(measure_gadget(GadgetKind::Open, 3).unwrap().at(3), (0, 1));
        for d in 2..=5 {
            let c = measure_gadget(GadgetKind::Closed, d).unwrap();
            assert_eq!(c.at(d).0, c.at(d).1);
            assert_eq!(c.at(d + 1), (0, 0));
            assert_eq!(measure_gadget(GadgetKind::Open, d).unwrap().at(d), (0, 1));
        }
    }

    #[test]
    fn disjoint_union_adds_higher_counts() {
        let parts = [
            gadget(GadgetKind::Closed, 2).unwrap(),
            gadget(GadgetKind::Open, 3).unwrap(),
            gadget(GadgetKind::Open, 2).unwrap(),
        ];
        let census = |g: &DirectedGraph| count_all_ads(g, &build_flag_complex(g, None));
        let u = parts[1..].iter().fold(parts[0].clone(), |acc, g| disjoint_union(&acc, g));
        let whole = census(&u);
        for d in 2..=3 {
            let sum: (u64, u64) = parts
                .iter()
                .map(|g| census(g).row(d).map_or((0, 0), |r| (r.completed, r.almost)))
                .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            assert_eq!(whole.row(d).map(|r| (r.completed, r.almost)), Some(sum));
        }
    }

    #[test]
    fn target_parsing() {
        assert_eq!(target("1/3, 1/5").values(), &[ratio(1, 3), ratio(1, 5)]);
        assert_eq!(target("2/4").to_string(), "1/2");
        assert!(matches!("1/2,1".parse::<SynthesisTarget>(), Err(SynthError::InvalidTarget(_))));
        assert!(matches!("0".parse::<SynthesisTarget>(), Err(SynthError::InvalidTarget(_))));
        assert!(matches!("".parse::<SynthesisTarget>(), Err(SynthError::InvalidTarget(_))));
        assert!(matches!("a/b".parse::<SynthesisTarget>(), Err(SynthError::InvalidTarget(_))));
    }

    #[test]
    fn multiplier_solves_balance() {
        let m = multiplier(1, 5, 0, 0, 18, 1).unwrap();
        assert_eq!(m, 18);
        assert_eq!(multiplier(2, 7, 3, 10, 4, 1), None);
        let m = multiplier(2, 7, 2, 10, 4, 1).unwrap();
        let (nc, no) = ((m * 2 - 2) / 4, m * 5 - 8);
        assert_eq!((m, nc, no), (3, 1, 7));
        assert_eq!((2 + nc * 4) * 7, 2 * (10 + nc * 4 + no));
        assert_eq!(multiplier(1, 2, 1, 2, 2, 1), Some(1));
        assert_eq!(multiplier(1, 2, 1, 3, 2, 2), None);
    }

    #[test]
    fn single_dimension_targets() {
        for s in ["1/3", "1/2", "9/10", "1/7"] {
            let t = target(s);
            let out = synthesize(&t).unwrap();
            assert_eq!(out.method, Method::Density);
            let g = &out.graph;
            let n = g.vertex_count() as u64;
            assert_eq!(Rational::new((g.edge_count() as u64).into(), (n * (n - 1)).into()), t.values()[0]);
        }
    }

    #[test]
    fn sparse_targets_use_gadgets() {
        for s in ["1/100,1/2", "1/2000,1/2,1/2"] {
            let t = target(s);
            let out = synthesize(&t).unwrap();
            assert_eq!(out.method, Method::Gadgets, "{s}");
            assert!(realizes(&out.graph, &t));
        }
    }

    #[test]
    fn tiny_bound_is_infeasible() {
        let opts = SynthesisOptions { max_vertices: 4, search_steps: 100, seed: RngSeed(1) };
        assert_eq!(synthesize_with(&target("1/3,1/5"), &opts).unwrap_err(), SynthError::Infeasible { bound: 4 });
    }
}
