//! Census of the three almost-2-simplex constellations: divergent, chain and
//! convergent.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::closing::{ratio, Rational};
use crate::exec::{self, Backend};
use crate::graph::{DirectedGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("edge density {0} is outside [0, 1]")]
pub struct OutOfRange(pub Rational);

/// Closing chance of an endpoint pair in an ER graph: `2p - p²`.
pub fn chance_level(p_e: &Rational) -> Result<Rational, OutOfRange> {
    if *p_e < Rational::zero() || *p_e > Rational::one() {
        return Err(OutOfRange(p_e.clone()));
    }
    Ok(p_e * Rational::from_integer(2.into()) - p_e * p_e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotifCounts {
    pub total: u64,
    pub completed: u64,
    pub strict_total: u64,
    pub strict_completed: u64,
}

impl MotifCounts {
    pub fn ratio(&self) -> Option<Rational> {
        (self.total > 0).then(|| ratio(self.completed, self.total))
    }

    pub fn strict_ratio(&self) -> Option<Rational> {
        (self.strict_total > 0).then(|| ratio(self.strict_completed, self.strict_total))
    }

    fn record(&mut self, closed: bool, strict: bool) {
        self.total += 1;
        self.completed += closed as u64;
        self.strict_total += strict as u64;
        self.strict_completed += (strict && closed) as u64;
    }
}

impl std::ops::Add for MotifCounts {
    type Output = MotifCounts;
    fn add(self, o: MotifCounts) -> MotifCounts {
        MotifCounts {
            total: self.total + o.total,
            completed: self.completed + o.completed,
            strict_total: self.strict_total + o.strict_total,
            strict_completed: self.strict_completed + o.strict_completed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MotifKind {
    Divergent,
    Chain,
    Convergent,
}

impl MotifKind {
    pub const ALL: [MotifKind; 3] = [MotifKind::Divergent, MotifKind::Chain, MotifKind::Convergent];

    pub fn name(self) -> &'static str {
        match self {
            MotifKind::Divergent => "divergent",
            MotifKind::Chain => "chain",
            MotifKind::Convergent => "convergent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotifReport {
    pub divergent: MotifCounts,
    pub chain: MotifCounts,
    pub convergent: MotifCounts,
    /// Edge density `p_1`; `None` below two vertices.
    pub edge_density: Option<Rational>,
    pub chance_level: Option<Rational>,
}

impl MotifReport {
    pub fn get(&self, kind: MotifKind) -> &MotifCounts {
        match kind {
            MotifKind::Divergent => &self.divergent,
            MotifKind::Chain => &self.chain,
            MotifKind::Convergent => &self.convergent,
        }
    }

    /// Almost-2-simplices these instances account for. Divergent and
    /// convergent pairs share an endpoint position, so both orientations of
    /// the missing edge count.
    pub fn almost_two_simplices(&self) -> u64 {
        2 * self.divergent.total + self.chain.total + 2 * self.convergent.total
    }
}

type Triple = [MotifCounts; 3];

fn add3(a: Triple, b: Triple) -> Triple {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn center(g: &DirectedGraph, c: Vertex, acc: &mut Triple) {
    let closed = |a: Vertex, b: Vertex| g.contains_edge(a, b) || g.contains_edge(b, a);
    let (out, inn) = (g.successors(c), g.predecessors(c));
    for (k, &a) in out.iter().enumerate() {
        for &b in &out[k + 1..] {
            acc[0].record(closed(a, b), !g.contains_edge(a, c) && !g.contains_edge(b, c));
        }
    }
    for &a in inn {
        for &b in out {
            if a != b {
                acc[1].record(closed(a, b), !g.contains_edge(c, a) && !g.contains_edge(b, c));
            }
        }
    }
    for (k, &a) in inn.iter().enumerate() {
        for &b in &inn[k + 1..] {
            acc[2].record(closed(a, b), !g.contains_edge(c, a) && !g.contains_edge(c, b));
        }
    }
}

/// Divergent and convergent instances are (centre, unordered endpoint pair);
/// chain instances are directed paths `a -> c -> b` with `a != b`.
pub fn census_motifs(g: &DirectedGraph) -> MotifReport {
    census_motifs_with(g, Backend::default())
}

pub fn census_motifs_with(g: &DirectedGraph, backend: Backend) -> MotifReport {
    let zero = [MotifCounts::default(); 3];
    let [divergent, chain, convergent] = exec::reduce_ranges(
        backend,
        g.vertex_count(),
        64,
        zero,
        |range| {
            let mut acc = zero;
            for c in range {
                center(g, c as Vertex, &mut acc);
            }
            acc
        },
        add3,
    );
    let n = g.vertex_count() as u64;
    let edge_density = (n > 1).then(|| ratio(g.edge_count() as u64, n * (n - 1)));
    let chance = edge_density.as_ref().map(|p| chance_level(p).expect("density lies in [0, 1]"));
    MotifReport { divergent, chain, convergent, edge_density, chance_level: chance }
}
