//! Directed flag complexes: ordered simplices, boundary maps and coboundary
//! lookup, both as a global table and as local bit-row intersections.

use std::fmt;

use thiserror::Error;

use crate::exec::{self, Backend};
use crate::graph::{DirectedGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagError {
    #[error("boundary index {index} out of range for a {dim}-simplex")]
    IndexOutOfRange { index: usize, dim: usize },
}

/// An ordered simplex `(v_0, ..., v_d)`; `v_0` is the source, `v_d` the sink.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<Vertex>);

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<Vertex>> for Simplex {
    fn from(v: Vec<Vertex>) -> Self {
        Simplex(v)
    }
}

impl From<&[Vertex]> for Simplex {
    fn from(v: &[Vertex]) -> Self {
        Simplex(v.to_vec())
    }
}

impl Simplex {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Dimension `d` = number of vertices minus one. The empty tuple has no
    /// dimension and reports `None`.
    pub fn dim(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Face obtained by omitting the vertex at position `i`.
    pub fn boundary(&self, i: usize) -> Result<Simplex, FlagError> {
        match self.dim() {
            Some(dim) if dim >= 1 && i <= dim => Ok(Simplex(omit(&self.0, i))),
            d => Err(FlagError::IndexOutOfRange { index: i, dim: d.unwrap_or(0) }),
        }
    }

    /// Tuple with `v` inserted so that it lands at position `i`.
    pub fn insert(&self, i: usize, v: Vertex) -> Simplex {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.extend_from_slice(&self.0[..i]);
        out.push(v);
        out.extend_from_slice(&self.0[i..]);
        Simplex(out)
    }

    /// Whether every forward pair `(v_i, v_j)`, `i < j`, is an edge of `g`.
    pub fn is_simplex_of(&self, g: &DirectedGraph) -> bool {
        let n = g.vertex_count();
        let vs = &self.0;
        vs.iter().all(|&v| (v as usize) < n)
            && vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && g.contains_edge(a, b)))
    }
}

pub(crate) fn omit(vs: &[Vertex], i: usize) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(vs.len().saturating_sub(1));
    out.extend_from_slice(&vs[..i]);
    out.extend_from_slice(&vs[i + 1..]);
    out
}

/// All simplices of one dimension, stored flat and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    dim: usize,
    data: Vec<Vertex>,
}

impl Layer {
    fn new(dim: usize, data: Vec<Vertex>) -> Self {
        debug_assert_eq!(data.len() % (dim + 1), 0);
        Layer { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / (self.dim + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, k: usize) -> &[Vertex] {
        let w = self.dim + 1;
        &self.data[k * w..(k + 1) * w]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, Vertex> {
        self.data.chunks_exact(self.dim + 1)
    }

    /// Index of `s` within the layer (binary search).
    pub fn position(&self, s: &[Vertex]) -> Option<usize> {
        if s.len() != self.dim + 1 {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[Vertex]) -> bool {
        self.position(s).is_some()
    }

    pub fn simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.iter().map(Simplex::from)
    }
}

/// The directed flag complex `S_0, ..., S_D` of a graph, possibly cut off at a
/// user-supplied dimension cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagComplex {
    layers: Vec<Layer>,
    truncated: bool,
}

impl FlagComplex {
    /// Highest dimension with a non-empty layer; `None` for the empty graph.
    pub fn max_dimension(&self) -> Option<usize> {
        self.layers.iter().rposition(|l| !l.is_empty())
    }

    pub fn layer(&self, d: usize) -> Option<&Layer> {
        self.layers.get(d)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// `N_d`; zero beyond the stored layers.
    pub fn count(&self, d: usize) -> u64 {
        self.layers.get(d).map_or(0, |l| l.len() as u64)
    }

    /// True when a dimension cap stopped construction while higher simplices
    /// still existed.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn total_simplices(&self) -> u64 {
        self.layers.iter().map(|l| l.len() as u64).sum()
    }
}

/// Scratch buffers for coboundary computations on one worker.
pub struct CoboundaryScratch {
    suffix: Vec<u64>,
    prefix: Vec<u64>,
    full: Vec<u64>,
    words: usize,
}

impl CoboundaryScratch {
    pub fn new(g: &DirectedGraph) -> Self {
        CoboundaryScratch { suffix: Vec::new(), prefix: Vec::new(), full: g.full_row(), words: g.row_words() }
    }

    /// Appends every `(i, v)` such that inserting `v` at position `i` of `tau`
    /// yields a simplex of `g`, sorted by `i` then `v`.
    ///
    /// The candidate set for position `i` is the intersection of the
    /// out-rows of `v_0..v_{i-1}` with the in-rows of `v_i..v_{d-1}`. Suffix
    /// intersections of in-rows are precomputed; the out-row prefix is grown
    /// by one row per position.
    #[allow(clippy::needless_range_loop)]
    pub fn local_coboundaries(&mut self, g: &DirectedGraph, tau: &[Vertex], out: &mut Vec<(u32, Vertex)>) {
        let w = self.words;
        let d = tau.len();
        self.suffix.clear();
        self.suffix.resize((d + 1) * w, 0);
        self.suffix[d * w..].copy_from_slice(&self.full);
        for j in (0..d).rev() {
            let (head, tail) = self.suffix.split_at_mut((j + 1) * w);
            let row = g.in_row(tau[j]);
            for k in 0..w {
                head[j * w + k] = tail[k] & row[k];
            }
        }
        self.prefix.clear();
        self.prefix.extend_from_slice(&self.full);
        for i in 0..=d {
            let suf = &self.suffix[i * w..(i + 1) * w];
            for (k, (&p, &s)) in self.prefix.iter().zip(suf).enumerate() {
                let mut bits = p & s;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    out.push((i as u32, (k * 64 + b) as Vertex));
                    bits &= bits - 1;
                }
            }
            if i < d {
                let row = g.out_row(tau[i]);
                let mut any = 0;
                for (p, &r) in self.prefix.iter_mut().zip(row) {
                    *p &= r;
                    any |= *p;
                }
                if any == 0 {
                    break;
                }
            }
        }
    }

    /// Vertices `v` with `tau ++ (v)` a simplex: the sink-position row of the
    /// local coboundaries.
    pub fn sink_extensions(&mut self, g: &DirectedGraph, tau: &[Vertex], out: &mut Vec<Vertex>) {
        self.prefix.clear();
        self.prefix.extend_from_slice(g.out_row(tau[0]));
        for &v in &tau[1..] {
            for (p, &r) in self.prefix.iter_mut().zip(g.out_row(v)) {
                *p &= r;
            }
        }
        for (k, &word) in self.prefix.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push((k * 64 + bits.trailing_zeros() as usize) as Vertex);
                bits &= bits - 1;
            }
        }
    }
}

/// Local coboundaries of a single simplex as `(position, vertex)` pairs.
pub fn local_coboundaries(g: &DirectedGraph, tau: &[Vertex]) -> Vec<(usize, Vertex)> {
    let mut scratch = CoboundaryScratch::new(g);
    let mut out = Vec::new();
    scratch.local_coboundaries(g, tau, &mut out);
    out.into_iter().map(|(i, v)| (i as usize, v)).collect()
}

/// One entry of a coboundary table: the `d`-simplex at `simplex` in `S_d`
/// has the keyed face at boundary position `position`, whose omitted vertex
/// is `inserted_vertex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoboundaryEntry {
    pub simplex: usize,
    pub position: usize,
    pub inserted_vertex: Vertex,
}

/// Global coboundary table from `S_d` down to `S_{d-1}`: entry `k` lists
/// the cofaces of the `k`-th simplex of `lower`. Each list is sorted by
/// position, then vertex.
pub fn coboundaries_table(upper: &Layer, lower: &Layer) -> Vec<Vec<CoboundaryEntry>> {
    assert_eq!(upper.dim(), lower.dim() + 1, "layers must be adjacent");
    let mut table = vec![Vec::new(); lower.len()];
    for (k, sigma) in upper.iter().enumerate() {
        for i in 0..sigma.len() {
            let face = omit(sigma, i);
            let t = lower.position(&face).expect("flag complexes are closed under boundaries");
            table[t].push(CoboundaryEntry { simplex: k, position: i, inserted_vertex: sigma[i] });
        }
    }
    for list in &mut table {
        list.sort_unstable_by_key(|e| (e.position, e.inserted_vertex));
    }
    table
}

const BUILD_GRAIN: usize = 512;

/// Builds the directed flag complex of `g`, keeping layers `S_0..S_k` when a
/// cap `k` is given.
pub fn build_flag_complex(g: &DirectedGraph, max_dim: Option<usize>) -> FlagComplex {
    build_flag_complex_with(g, max_dim, Backend::default())
}

pub fn build_flag_complex_with(g: &DirectedGraph, max_dim: Option<usize>, backend: Backend) -> FlagComplex {
    let n = g.vertex_count();
    let mut layers = vec![Layer::new(0, (0..n as Vertex).collect())];
    let cap = max_dim.unwrap_or(usize::MAX);
    let mut truncated = false;
    loop {
        let prev = layers.last().expect("S_0 exists");
        if prev.is_empty() {
            break;
        }
        let d = prev.dim() + 1;
        if d > cap {
            truncated = has_extension(g, prev);
            break;
        }
        let next = extend_layer(g, prev, backend);
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    FlagComplex { layers, truncated }
}

fn extend_layer(g: &DirectedGraph, prev: &Layer, backend: Backend) -> Layer {
    let d = prev.dim() + 1;
    if d == 1 {
        let data = g.edges().flat_map(|(u, v)| [u, v]).collect();
        return Layer::new(1, data);
    }
    let data = exec::map_ordered(backend, prev.len(), BUILD_GRAIN, |range| {
        let mut scratch = CoboundaryScratch::new(g);
        let mut ext = Vec::new();
        let mut out = Vec::new();
        for k in range {
            let tau = prev.get(k);
            ext.clear();
            scratch.sink_extensions(g, tau, &mut ext);
            for &v in &ext {
                out.extend_from_slice(tau);
                out.push(v);
            }
        }
        out
    });
    Layer::new(d, data)
}

fn has_extension(g: &DirectedGraph, layer: &Layer) -> bool {
    if layer.dim() == 0 {
        return g.edge_count() > 0;
    }
    let mut scratch = CoboundaryScratch::new(g);
    let mut ext = Vec::new();
    layer.iter().any(|tau| {
        ext.clear();
        scratch.sink_extensions(g, tau, &mut ext);
        !ext.is_empty()
    })
}
