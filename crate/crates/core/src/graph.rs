//! Simple directed graphs stored as bit rows, plus the edge-list text format
//! and the matched-edge-count random generator.

use std::fmt;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Vertex id. Vertices are dense integers `0..vertex_count`.
pub type Vertex = u32;

/// Problems with a single edge.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdgeError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    Duplicate(Vertex, Vertex),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    OutOfRange { vertex: u64, n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Edge(#[from] EdgeError),
    /// An edge error located at a 1-based line of edge-list input.
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: EdgeError },
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cannot place {m} edges on {n} vertices (at most {max})")]
    TooManyEdges { n: usize, m: usize, max: usize },
}

/// Seed for the random generators. Same seed and parameters give the same
/// graph within one build of this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A simple directed graph: no self-loops, no multi-edges, reciprocal pairs
/// allowed. Adjacency is kept both as fixed-width bit rows (for set
/// intersections) and as sorted neighbour lists (for sparse iteration).
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    words: usize,
    out_bits: Vec<u64>,
    in_bits: Vec<u64>,
    out_list: Vec<Vec<Vertex>>,
    in_list: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedGraph")
            .field("vertices", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl DirectedGraph {
    /// Graph with `n` isolated vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        DirectedGraph {
            n,
            words,
            out_bits: vec![0; n * words],
            in_bits: vec![0; n * words],
            out_list: vec![Vec::new(); n],
            in_list: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Edges may come in any order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.finish())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of 64-bit words per adjacency row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    fn check(&self, v: Vertex) -> Result<(), EdgeError> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(EdgeError::OutOfRange { vertex: v as u64, n: self.n })
        }
    }

    /// Checked edge test.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.contains_edge(u, v))
    }

    /// Unchecked O(1) edge test. Panics if `u` or `v` is out of range.
    #[inline]
    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        let v = v as usize;
        debug_assert!(v < self.n);
        self.out_bits[u as usize * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn out_row(&self, v: Vertex) -> &[u64] {
        let s = v as usize * self.words;
        &self.out_bits[s..s + self.words]
    }

    #[inline]
    pub fn in_row(&self, v: Vertex) -> &[u64] {
        let s = v as usize * self.words;
        &self.in_bits[s..s + self.words]
    }

    /// Sorted successors of `v`.
    pub fn successors(&self, v: Vertex) -> &[Vertex] {
        &self.out_list[v as usize]
    }

    /// Sorted predecessors of `v`.
    pub fn predecessors(&self, v: Vertex) -> &[Vertex] {
        &self.in_list[v as usize]
    }

    /// Edges in ascending `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_list.iter().enumerate().flat_map(|(u, outs)| outs.iter().map(move |&v| (u as Vertex, v)))
    }

    /// Ordered-pair edge density `|E| / (N_0 (N_0 - 1))`, `None` below two vertices.
    pub fn density(&self) -> Option<f64> {
        let pairs = self.n.checked_mul(self.n.saturating_sub(1))?;
        (pairs > 0).then(|| self.edge_count as f64 / pairs as f64)
    }

    /// Bit row with every vertex set.
    pub fn full_row(&self) -> Vec<u64> {
        let mut row = vec![u64::MAX; self.words];
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = row.last_mut() {
                *last = (1u64 << rem) - 1;
            }
        }
        row
    }
}

/// Incremental construction with per-edge validation.
#[derive(Debug)]
pub struct GraphBuilder {
    g: DirectedGraph,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { g: DirectedGraph::empty(n) }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), EdgeError> {
        let g = &mut self.g;
        g.check(u)?;
        g.check(v)?;
        if u == v {
            return Err(EdgeError::SelfLoop(u));
        }
        if g.contains_edge(u, v) {
            return Err(EdgeError::Duplicate(u, v));
        }
        let (ui, vi, w) = (u as usize, v as usize, g.words);
        g.out_bits[ui * w + vi / 64] |= 1 << (vi % 64);
        g.in_bits[vi * w + ui / 64] |= 1 << (ui % 64);
        g.out_list[ui].push(v);
        g.in_list[vi].push(u);
        g.edge_count += 1;
        Ok(())
    }

    pub fn finish(mut self) -> DirectedGraph {
        for l in self.g.out_list.iter_mut().chain(self.g.in_list.iter_mut()) {
            l.sort_unstable();
        }
        self.g
    }
}

/// Supported text formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    EdgeList,
}

/// Parses the edge-list format:
///
/// ```text
/// # optional comments
/// V <n>
/// E
/// <u> <v>
/// ...
/// ```
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<DirectedGraph, GraphError> {
    let GraphFormat::EdgeList = format;
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let malformed = |line: usize, reason: &str| GraphError::Malformed { line, reason: reason.to_string() };

    let (line, header) = lines.next().ok_or_else(|| malformed(1, "missing 'V <n>' header"))?;
    let mut parts = header.split_whitespace();
    let n = match (parts.next(), parts.next(), parts.next()) {
        (Some("V"), Some(n), None) => {
            n.parse::<usize>().map_err(|_| malformed(line, "vertex count is not a non-negative integer"))?
        }
        _ => return Err(malformed(line, "expected 'V <n>'")),
    };
    if n > Vertex::MAX as usize {
        return Err(malformed(line, "vertex count too large"));
    }
    match lines.next() {
        Some((_, "E")) => {}
        Some((line, _)) => return Err(malformed(line, "expected 'E'")),
        None => return Err(malformed(line + 1, "missing 'E' line")),
    }

    let mut b = GraphBuilder::new(n);
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(malformed(line, "expected '<u> <v>'")),
        };
        let parse = |s: &str| s.parse::<u64>().map_err(|_| malformed(line, "vertex id is not a non-negative integer"));
        let (u, v) = (parse(u)?, parse(v)?);
        for x in [u, v] {
            if x >= n as u64 {
                return Err(GraphError::AtLine { line, source: EdgeError::OutOfRange { vertex: x, n } });
            }
        }
        b.add_edge(u as Vertex, v as Vertex).map_err(|source| GraphError::AtLine { line, source })?;
    }
    Ok(b.finish())
}

/// Canonical edge-list text: header then edges ascending by `(u, v)`.
pub fn serialize_graph(g: &DirectedGraph) -> String {
    let mut s = String::with_capacity(16 + g.edge_count() * 12);
    let _ = writeln!(s, "V {}", g.vertex_count());
    s.push_str("E\n");
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Uniform random digraph with exactly `n` vertices and `m` distinct
/// non-loop edges, sampled without replacement.
pub fn generate_er(n: usize, m: usize, seed: RngSeed) -> Result<DirectedGraph, GraphError> {
    let max = n.saturating_mul(n.saturating_sub(1));
    if m > max {
        return Err(GraphError::TooManyEdges { n, m, max });
    }
    let mut rng = seed.rng();
    let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, max, m).into_vec();
    picked.sort_unstable();
    let mut b = GraphBuilder::new(n);
    for k in picked {
        let u = k / (n - 1);
        let r = k % (n - 1);
        let v = if r < u { r } else { r + 1 };
        b.add_edge(u as Vertex, v as Vertex).expect("sampled pairs are distinct non-loops");
    }
    Ok(b.finish())
}

/// Disjoint union; vertices of `b` are shifted by `a.vertex_count()`.
pub fn disjoint_union(a: &DirectedGraph, b: &DirectedGraph) -> DirectedGraph {
    let shift = a.vertex_count() as Vertex;
    let edges = a.edges().chain(b.edges().map(|(u, v)| (u + shift, v + shift)));
    DirectedGraph::from_edges(a.vertex_count() + b.vertex_count(), edges).expect("union of valid graphs is valid")
}
