//! Completion probabilities, closing contributions and the matched ER baseline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::RngCore;
use thiserror::Error;

use crate::almost::{count_all_ads_with, CensusCounts, RowKind};
use crate::exec::{self, Backend};
use crate::flag::build_flag_complex_with;
use crate::graph::{generate_er, DirectedGraph, RngSeed};

pub type Rational = BigRational;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn binom(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `p_d = completed_d / N^A_d` for every census row; `None` when there are no
/// almost-simplices.
pub fn compute_p(counts: &CensusCounts) -> Vec<Option<Rational>> {
    counts.rows.iter().map(|r| (r.almost > 0).then(|| ratio(r.completed, r.almost))).collect()
}

/// `p̂_d = p_d - Σ_{i<d} C(d-1, i-1) p̂_i`.
pub fn compute_p_hat(p: &[Rational]) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(p.len());
    for (k, pd) in p.iter().enumerate() {
        let lower = (0..k).fold(Rational::zero(), |acc, j| acc + &out[j] * binom(k, j));
        out.push(pd - lower);
    }
    out
}

/// Inverse of [`compute_p_hat`].
pub fn invert_p_hat(p_hat: &[Rational]) -> Vec<Rational> {
    (0..p_hat.len()).map(|k| (0..=k).fold(Rational::zero(), |acc, j| acc + &p_hat[j] * binom(k, j))).collect()
}

/// Keeps only the first two contributions: `p_d - p̂_1 - (d-1) p̂_2`.
pub fn compute_p_hat2(p: &[Rational]) -> Vec<Rational> {
    let ph = compute_p_hat(&p[..p.len().min(2)]);
    p.iter()
        .enumerate()
        .map(|(k, pd)| match k {
            0 | 1 => ph[k].clone(),
            _ => pd - &ph[0] - &ph[1] * BigInt::from(k),
        })
        .collect()
}

/// Per-dimension profile for `d = 1..` over the census rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosingProfile {
    pub p: Vec<Option<Rational>>,
    pub p_hat: Vec<Option<Rational>>,
    pub p_hat2: Vec<Option<Rational>>,
    /// Top simplex dimension `D` of the complex, if any vertex exists.
    pub max_dim: Option<usize>,
}

impl ClosingProfile {
    /// Contributions are evaluated over the defined prefix of `p`, stopping
    /// before the first undefined or cap-adjacent row.
    pub fn from_counts(counts: &CensusCounts) -> Self {
        let p = compute_p(counts);
        let usable =
            counts.rows.iter().zip(&p).take_while(|(r, pd)| pd.is_some() && r.kind != RowKind::CapAdjacent).count();
        let prefix: Vec<Rational> = p[..usable].iter().map(|x| x.clone().expect("defined prefix")).collect();
        let pad = |v: Vec<Rational>| -> Vec<Option<Rational>> {
            let mut out: Vec<Option<Rational>> = v.into_iter().map(Some).collect();
            out.resize(p.len(), None);
            out
        };
        let p_hat = pad(compute_p_hat(&prefix));
        let p_hat2 = pad(compute_p_hat2(&prefix));
        debug_assert_eq!(invert_p_hat(&compute_p_hat(&prefix)), prefix);
        let max_dim = counts
            .rows
            .iter()
            .rev()
            .find_map(|r| r.simplices.filter(|&n| n > 0).map(|_| r.dim))
            .or(if counts.vertices > 0 { Some(0) } else { None });
        ClosingProfile { p, p_hat, p_hat2, max_dim }
    }
}

/// Sample mean and spread of one quantity over the replicates that define it.
#[derive(Clone, Debug, PartialEq)]
pub struct Stat {
    pub samples: usize,
    pub mean: Option<Rational>,
    /// Unbiased sample variance; needs two samples.
    pub variance: Option<Rational>,
}

impl Stat {
    pub fn from_values<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Stat {
        let values: Vec<&Rational> = values.into_iter().collect();
        let k = values.len();
        if k == 0 {
            return Stat { samples: 0, mean: None, variance: None };
        }
        let sum = values.iter().fold(Rational::zero(), |acc, v| acc + *v);
        let mean = sum / BigInt::from(k);
        let variance = (k > 1).then(|| {
            let ss = values.iter().fold(Rational::zero(), |acc, v| {
                let dv = *v - &mean;
                acc + &dv * &dv
            });
            ss / BigInt::from(k - 1)
        });
        Stat { samples: k, mean: Some(mean), variance }
    }

    pub fn std(&self) -> Option<f64> {
        self.variance.as_ref().and_then(|v| v.to_f64()).map(f64::sqrt)
    }

    /// Standard error of the mean.
    pub fn std_err(&self) -> Option<f64> {
        self.std().map(|s| s / (self.samples as f64).sqrt())
    }

    pub fn mean_f64(&self) -> Option<f64> {
        self.mean.as_ref().and_then(|m| m.to_f64())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineRow {
    pub dim: usize,
    pub simplices: Stat,
    pub p: Stat,
    pub p_hat: Stat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineReport {
    pub replicates: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub vertices: u64,
    pub edges: u64,
    /// Rows `d = 1..` up to the largest census row of any replicate.
    pub rows: Vec<BaselineRow>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("at least one replicate is required")]
    NoReplicates,
}

/// Replicate seeds derived from the master seed.
pub fn replicate_seeds(master: RngSeed, replicates: usize) -> Vec<u64> {
    let mut rng = master.rng();
    (0..replicates).map(|_| rng.next_u64()).collect()
}

pub fn er_baseline(
    g: &DirectedGraph,
    replicates: usize,
    seed: RngSeed,
    max_dim: Option<usize>,
) -> Result<BaselineReport, BaselineError> {
    er_baseline_with(g, replicates, seed, max_dim, Backend::default())
}

/// Census and profile of `replicates` ER graphs with the vertex and edge
/// counts of `g`.
pub fn er_baseline_with(
    g: &DirectedGraph,
    replicates: usize,
    seed: RngSeed,
    max_dim: Option<usize>,
    backend: Backend,
) -> Result<BaselineReport, BaselineError> {
    if replicates == 0 {
        return Err(BaselineError::NoReplicates);
    }
    let seeds = replicate_seeds(seed, replicates);
    let (n, m) = (g.vertex_count(), g.edge_count());
    let runs: Vec<(CensusCounts, ClosingProfile)> = exec::map_ordered(backend, replicates, 1, |range| {
        range
            .map(|k| {
                let h = generate_er(n, m, RngSeed(seeds[k])).expect("edge count of an existing graph fits");
                let c = build_flag_complex_with(&h, max_dim, backend);
                let counts = count_all_ads_with(&h, &c, backend);
                let profile = ClosingProfile::from_counts(&counts);
                (counts, profile)
            })
            .collect()
    });
    let depth = runs.iter().map(|(c, _)| c.rows.len()).max().unwrap_or(0);
    let rows = (0..depth)
        .map(|k| {
            let n_d: Vec<Rational> =
                runs.iter().map(|(c, _)| ratio(c.rows.get(k).and_then(|r| r.simplices).unwrap_or(0), 1)).collect();
            let pick = |f: fn(&ClosingProfile) -> &Vec<Option<Rational>>| -> Stat {
                Stat::from_values(runs.iter().filter_map(|(_, p)| f(p).get(k).and_then(Option::as_ref)))
            };
            BaselineRow { dim: k + 1, simplices: Stat::from_values(&n_d), p: pick(|p| &p.p), p_hat: pick(|p| &p.p_hat) }
        })
        .collect();
    Ok(BaselineReport { replicates, master_seed: seed.0, seeds, vertices: n as u64, edges: m as u64, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almost::count_all_ads;
    use crate::flag::build_flag_complex;
    use crate::graph::fixtures::*;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn rs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| r(a, b)).collect()
    }

    fn profile(g: &DirectedGraph, cap: Option<usize>) -> ClosingProfile {
        ClosingProfile::from_counts(&count_all_ads(g, &build_flag_complex(g, cap)))
    }

    #[test]
    fn p_of_fixtures() {
        assert_eq!(profile(&g1(), None).p, vec![Some(r(1, 2)), Some(r(3, 5)), None]);
        assert_eq!(profile(&g3(), None).p, vec![Some(r(2, 6)), Some(r(0, 1))]);
        assert_eq!(profile(&DirectedGraph::empty(1), None).p, vec![None]);
    }

    #[test]
    fn contributions_of_fixtures() {
        let g1p = profile(&g1(), None);
        assert_eq!(g1p.p_hat, vec![Some(r(1, 2)), Some(r(1, 10)), None]);
        assert_eq!(g1p.max_dim, Some(2));
        let g3p = profile(&g3(), None);
        assert_eq!(g3p.p_hat, vec![Some(r(1, 3)), Some(r(-1, 3))]);
        assert_eq!(g3p.max_dim, Some(1));
    }

    #[test]
    fn capped_profile_stops_before_cap_adjacent_row() {
        let p = profile(&g1(), Some(1));
        assert_eq!(p.p, vec![Some(r(1, 2)), Some(r(3, 5))]);
        assert_eq!(p.p_hat, vec![Some(r(1, 2)), None]);
    }

    #[test]
    fn recursion_examples() {
        let q = r(7, 19);
        assert_eq!(
            compute_p_hat(&[q.clone(), q.clone(), q.clone(), q.clone()]),
            vec![q.clone(), r(0, 1), r(0, 1), r(0, 1)]
        );
        assert_eq!(compute_p_hat(&rs(&[(1, 3), (0, 1)])), rs(&[(1, 3), (-1, 3)]));
        assert_eq!(compute_p_hat(&rs(&[(1, 10), (2, 10), (3, 10), (4, 10)])), rs(&[(1, 10), (1, 10), (0, 1), (0, 1)]));
        assert!(compute_p_hat(&[]).is_empty());
    }

    #[test]
    fn second_order_examples() {
        assert_eq!(compute_p_hat2(&rs(&[(1, 10), (2, 10), (3, 10)])), rs(&[(1, 10), (1, 10), (0, 1)]));
        let p = rs(&[(1, 10), (2, 10), (3, 10), (5, 10)]);
        assert_eq!(compute_p_hat2(&p)[3], r(1, 10));
        assert_eq!(compute_p_hat(&p)[3], r(1, 10));
        let q = r(2, 9);
        assert_eq!(compute_p_hat2(&[q.clone(), q.clone(), q.clone(), q.clone()]), vec![q, r(0, 1), r(0, 1), r(0, 1)]);
        assert_eq!(compute_p_hat2(&rs(&[(1, 4)])), rs(&[(1, 4)]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(invert_p_hat(&rs(&[(1, 3), (-1, 3)])), rs(&[(1, 3), (0, 1)]));
        assert_eq!(invert_p_hat(&rs(&[(2, 5), (0, 1), (0, 1)])), rs(&[(2, 5), (2, 5), (2, 5)]));
    }

    #[test]
    fn stat_is_exact() {
        let s = Stat::from_values(&rs(&[(1, 2), (1, 4), (1, 4)]));
        assert_eq!(s.mean, Some(r(1, 3)));
        assert_eq!(s.variance, Some(r(1, 48)));
        let one = Stat::from_values(&rs(&[(1, 2)]));
        assert_eq!((one.std(), one.variance), (None, None));
        assert_eq!(Stat::from_values(&[]).mean, None);
    }

    #[test]
    fn baseline_matches_low_dimensions_exactly() {
        let g = generate_er(30, 120, RngSeed(5)).unwrap();
        let b = er_baseline(&g, 6, RngSeed(11), None).unwrap();
        assert_eq!((b.vertices, b.edges, b.seeds.len()), (30, 120, 6));
        assert_eq!(b.rows[0].simplices.mean, Some(r(120, 1)));
        assert_eq!(b.rows[0].simplices.variance, Some(r(0, 1)));
        assert_eq!(b.rows[0].p.mean, Some(r(120, 870)));
        assert_eq!(b.rows[0].p_hat.mean, Some(r(120, 870)));
        assert_eq!(b, er_baseline_with(&g, 6, RngSeed(11), None, Backend::Sequential).unwrap());
        assert_eq!(er_baseline(&g, 0, RngSeed(1), None), Err(BaselineError::NoReplicates));
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(replicate_seeds(RngSeed(3), 4), replicate_seeds(RngSeed(3), 4));
        assert_ne!(replicate_seeds(RngSeed(3), 4), replicate_seeds(RngSeed(4), 4));
    }
}
