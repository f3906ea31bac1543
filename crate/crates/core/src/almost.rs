//! Almost-d-simplices: two (d-1)-simplices sharing a (d-2)-face plus one
//! admissible missing edge. Enumeration, counting and completion.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Backend};
use crate::flag::{coboundaries_table, CoboundaryScratch, FlagComplex, Simplex};
use crate::graph::{DirectedGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlmostError {
    #[error("dimension {dim} out of range (expected {min}..={max})")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },
    #[error("layer {0} is not available in this complex")]
    LayerUnavailable(usize),
    #[error("enumeration would exceed {limit} almost-simplices")]
    TooMany { limit: usize },
}

/// `({sigma, sigma'}, e)`. `sigma` carries the tail of `e` at position
/// `positions.0`... unless `e` points the other way; see [`AlmostSimplex::oriented`].
///
/// The d = 1 form is `({v}, {v'}, (v, v'))` with positions `(0, 0)`: the
/// shared face is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlmostSimplex {
    pub sigma: Simplex,
    pub sigma_prime: Simplex,
    /// `(i, i')` with `∂_i(sigma) = ∂_{i'}(sigma_prime)`.
    pub positions: (usize, usize),
    pub missing_edge: (Vertex, Vertex),
}

/// Canonical identity of an almost-simplex: unordered pair plus edge.
pub type AlmostKey = (Simplex, Simplex, (Vertex, Vertex));

impl AlmostSimplex {
    /// The d = 1 almost-simplex on the ordered pair `(v, w)`.
    pub fn edge_pair(v: Vertex, w: Vertex) -> Self {
        AlmostSimplex {
            sigma: Simplex::new(vec![v]),
            sigma_prime: Simplex::new(vec![w]),
            positions: (0, 0),
            missing_edge: (v, w),
        }
    }

    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn key(&self) -> AlmostKey {
        let (a, b) = if self.sigma <= self.sigma_prime {
            (self.sigma.clone(), self.sigma_prime.clone())
        } else {
            (self.sigma_prime.clone(), self.sigma.clone())
        };
        (a, b, self.missing_edge)
    }

    /// Returns `(tail side, head side)` as `(simplex, position)` so that the
    /// missing edge runs from the tail side's inserted vertex to the head
    /// side's, with tail position ≤ head position.
    pub fn oriented(&self) -> ((&Simplex, usize), (&Simplex, usize)) {
        let (i, ip) = self.positions;
        let v = self.sigma.vertices()[i];
        if self.missing_edge.0 == v {
            ((&self.sigma, i), (&self.sigma_prime, ip))
        } else {
            ((&self.sigma_prime, ip), (&self.sigma, i))
        }
    }

    /// Checks the defining conditions: shared face at the recorded positions,
    /// distinct differing vertices, an admissible orientation of `e`, and both
    /// sides being simplices of `g`.
    pub fn is_valid_in(&self, g: &DirectedGraph) -> bool {
        let d = self.dim();
        let (i, ip) = self.positions;
        if d == 0 || self.sigma_prime.len() != d || i >= d || ip >= d {
            return false;
        }
        let (s, sp) = (self.sigma.vertices(), self.sigma_prime.vertices());
        let (v, vp) = (s[i], sp[ip]);
        let shared = crate::flag::omit(s, i) == crate::flag::omit(sp, ip);
        let admissible = (self.missing_edge == (v, vp) && i <= ip) || (self.missing_edge == (vp, v) && ip <= i);
        shared && v != vp && admissible && self.sigma.is_simplex_of(g) && self.sigma_prime.is_simplex_of(g)
    }
}

/// Whether the missing edge is present in `g`.
#[inline]
pub fn is_completed(g: &DirectedGraph, a: &AlmostSimplex) -> bool {
    g.contains_edge(a.missing_edge.0, a.missing_edge.1)
}

/// The unique d-simplex spanned by the almost-simplex and its missing edge.
///
/// With the tail side `s` at position `i` and the head side `s'` at `i' ≥ i`,
/// the result is `s_0..s_{i'}`, then `s'_{i'}`, then `s_{i'+1}..s_{d-1}`.
pub fn complete(a: &AlmostSimplex) -> Simplex {
    let ((tail, _), (head, ip)) = a.oriented();
    tail.insert(ip + 1, head.vertices()[ip])
}

/// The `C(d-1, i-1)` almost-i-simplices inside `a` that share its missing
/// edge. Face orders are inherited from the completed simplex.
pub fn sub_almost_simplices(a: &AlmostSimplex, i: usize) -> Result<Vec<AlmostSimplex>, AlmostError> {
    let d = a.dim();
    if i == 0 || i > d {
        return Err(AlmostError::DimensionOutOfRange { dim: i, min: 1, max: d });
    }
    let full = complete(a);
    let (e1, e2) = a.missing_edge;
    let others: Vec<Vertex> = full.vertices().iter().copied().filter(|&v| v != e1 && v != e2).collect();
    let in_order = |keep: &[Vertex], extra: Vertex| -> (Simplex, usize) {
        let verts: Vec<Vertex> = full.vertices().iter().copied().filter(|v| *v == extra || keep.contains(v)).collect();
        let pos = verts.iter().position(|&v| v == extra).expect("inserted vertex present");
        (Simplex::new(verts), pos)
    };
    Ok(others
        .iter()
        .copied()
        .combinations(i - 1)
        .map(|shared| {
            let (s1, p1) = in_order(&shared, e1);
            let (s2, p2) = in_order(&shared, e2);
            AlmostSimplex { sigma: s1, sigma_prime: s2, positions: (p1, p2), missing_edge: (e1, e2) }
        })
        .collect())
}

/// Default cap on materialized almost-simplices.
pub const ENUMERATION_LIMIT: usize = 5_000_000;

/// Materializes every almost-d-simplex (`d ≥ 2`) from the global coboundary
/// table of `S_{d-1}` over `S_{d-2}`. Pairs with equal positions emit both
/// edge orientations.
pub fn ads_enumerator(complex: &FlagComplex, d: usize, limit: usize) -> Result<Vec<AlmostSimplex>, AlmostError> {
    let top = complex.layers().len();
    if d < 2 {
        return Err(AlmostError::DimensionOutOfRange { dim: d, min: 2, max: top });
    }
    let lower = complex.layer(d - 2).ok_or(AlmostError::LayerUnavailable(d - 2))?;
    let upper = match complex.layer(d - 1) {
        Some(l) => l,
        None if complex.truncated() => return Err(AlmostError::LayerUnavailable(d - 1)),
        None => return Ok(Vec::new()),
    };
    let table = coboundaries_table(upper, lower);
    let mut out = Vec::new();
    for entries in &table {
        for (k, l) in (0..entries.len()).tuple_combinations() {
            let (a, b) = (entries[k], entries[l]);
            if a.inserted_vertex == b.inserted_vertex {
                continue;
            }
            let sigma = Simplex::from(upper.get(a.simplex));
            let sigma_prime = Simplex::from(upper.get(b.simplex));
            let positions = (a.position, b.position);
            let mut push = |e| {
                out.push(AlmostSimplex {
                    sigma: sigma.clone(),
                    sigma_prime: sigma_prime.clone(),
                    positions,
                    missing_edge: e,
                })
            };
            if a.position <= b.position {
                push((a.inserted_vertex, b.inserted_vertex));
            }
            if a.position >= b.position {
                push((b.inserted_vertex, a.inserted_vertex));
            }
            if out.len() > limit {
                return Err(AlmostError::TooMany { limit });
            }
        }
    }
    Ok(out)
}

/// How a census row relates to the complex it was computed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// `d ≤ D`: a simplex dimension of the complex.
    Regular,
    /// `d = D + 1` of a complete complex: every almost-simplex is open.
    BeyondTop,
    /// `d = K + 1` of a complex capped at `K`: `N_d` unknown, completions
    /// counted by direct edge tests.
    CapAdjacent,
}

/// Counts for one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimensionCensus {
    pub dim: usize,
    /// `N_d`; `None` on a cap-adjacent row.
    pub simplices: Option<u64>,
    /// `N_d^A`.
    pub almost: u64,
    pub completed: u64,
    /// Coboundary pairs of a shared face that insert the same vertex.
    pub rejected_pairs: u64,
    pub kind: RowKind,
}

/// Per-dimension counts for `d = 1..=D+1` (or `K+1` when capped).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CensusCounts {
    pub vertices: u64,
    pub edges: u64,
    pub rows: Vec<DimensionCensus>,
    pub truncated: bool,
}

impl CensusCounts {
    pub fn row(&self, d: usize) -> Option<&DimensionCensus> {
        d.checked_sub(1).and_then(|k| self.rows.get(k))
    }

    pub fn total_almost(&self) -> u64 {
        self.rows.iter().map(|r| r.almost).sum()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
struct Partial {
    almost: u64,
    completed: u64,
    rejected: u64,
}

impl std::ops::Add for Partial {
    type Output = Partial;
    fn add(self, o: Partial) -> Partial {
        Partial {
            almost: self.almost + o.almost,
            completed: self.completed + o.completed,
            rejected: self.rejected + o.rejected,
        }
    }
}

const COUNT_GRAIN: usize = 256;

/// Counts almost-simplices of every dimension without materializing them.
pub fn count_all_ads(g: &DirectedGraph, complex: &FlagComplex) -> CensusCounts {
    count_all_ads_with(g, complex, Backend::default())
}

pub fn count_all_ads_with(g: &DirectedGraph, complex: &FlagComplex, backend: Backend) -> CensusCounts {
    let n = g.vertex_count() as u64;
    let top = complex.max_dimension();
    let truncated = complex.truncated();
    let last = top.map_or(1, |t| t + 1);
    let mut rows = Vec::with_capacity(last);
    for d in 1..=last {
        let beyond = top.is_none_or(|t| d > t);
        let kind = match (beyond, truncated) {
            (false, _) => RowKind::Regular,
            (true, true) => RowKind::CapAdjacent,
            (true, false) => RowKind::BeyondTop,
        };
        let simplices = match kind {
            RowKind::Regular => Some(complex.count(d)),
            RowKind::BeyondTop => Some(0),
            RowKind::CapAdjacent => None,
        };
        let part = if d == 1 {
            Partial { almost: n * n.saturating_sub(1), completed: g.edge_count() as u64, rejected: 0 }
        } else {
            count_dimension(g, complex, d, backend)
        };
        if let Some(nd) = simplices {
            debug_assert_eq!(part.completed, binomial(d as u64 + 1, 2) * nd, "completion identity at d={d}");
        }
        rows.push(DimensionCensus {
            dim: d,
            simplices,
            almost: part.almost,
            completed: part.completed,
            rejected_pairs: part.rejected,
            kind,
        });
    }
    CensusCounts { vertices: n, edges: g.edge_count() as u64, rows, truncated }
}

/// Almost-d-simplices for `d ≥ 2`, sharded over shared faces in `S_{d-2}`.
fn count_dimension(g: &DirectedGraph, complex: &FlagComplex, d: usize, backend: Backend) -> Partial {
    let Some(faces) = complex.layer(d - 2) else {
        return Partial::default();
    };
    exec::reduce_ranges(
        backend,
        faces.len(),
        COUNT_GRAIN,
        Partial::default(),
        |range| {
            let mut scratch = CoboundaryScratch::new(g);
            let mut cob = Vec::new();
            let mut acc = Partial::default();
            for k in range {
                cob.clear();
                scratch.local_coboundaries(g, faces.get(k), &mut cob);
                // entries are sorted by position, so i <= i' for k < l
                for (x, &(i, v)) in cob.iter().enumerate() {
                    for &(ip, vp) in &cob[x + 1..] {
                        if v == vp {
                            acc.rejected += 1;
                        } else if i < ip {
                            acc.almost += 1;
                            acc.completed += g.contains_edge(v, vp) as u64;
                        } else {
                            acc.almost += 2;
                            acc.completed += g.contains_edge(v, vp) as u64 + g.contains_edge(vp, v) as u64;
                        }
                    }
                }
            }
            acc
        },
        |a, b| a + b,
    )
}
