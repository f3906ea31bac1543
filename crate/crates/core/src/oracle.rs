//! Exhaustive census straight from the definitions. Slow; for verification.

use std::collections::HashSet;

use itertools::Itertools;
use thiserror::Error;

use crate::almost::{CensusCounts, DimensionCensus, RowKind};
use crate::graph::{DirectedGraph, Vertex};

pub const DEFAULT_ORACLE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {n} vertices, oracle limit is {limit}")]
pub struct GraphTooLarge {
    pub n: usize,
    pub limit: usize,
}

fn is_simplex(g: &DirectedGraph, t: &[Vertex]) -> bool {
    t.iter().tuple_combinations().all(|(&a, &b)| g.contains_edge(a, b))
}

fn without(t: &[Vertex], i: usize) -> Vec<Vertex> {
    t.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect()
}

/// All ordered tuples that are simplices, grouped by dimension.
pub fn brute_force_simplices(g: &DirectedGraph) -> Vec<Vec<Vec<Vertex>>> {
    let n = g.vertex_count() as Vertex;
    let mut layers = Vec::new();
    for k in 1..=n as usize {
        let layer: Vec<Vec<Vertex>> = (0..n).permutations(k).filter(|t| is_simplex(g, t)).collect();
        if layer.is_empty() {
            break;
        }
        layers.push(layer);
    }
    layers
}

/// Census of a complete (uncapped) complex, computed by testing every ordered
/// tuple for simplices and every pair of (d-1)-simplices for almost-simplices.
pub fn brute_force_census(g: &DirectedGraph, limit: usize) -> Result<CensusCounts, GraphTooLarge> {
    let n = g.vertex_count();
    if n > limit {
        return Err(GraphTooLarge { n, limit });
    }
    let layers = brute_force_simplices(g);
    let top = layers.len();
    let nv = n as u64;
    let mut rows = vec![DimensionCensus {
        dim: 1,
        simplices: Some(layers.get(1).map_or(0, |l| l.len() as u64)),
        almost: nv * nv.saturating_sub(1),
        completed: (0..n as Vertex).permutations(2).filter(|p| g.contains_edge(p[0], p[1])).count() as u64,
        rejected_pairs: 0,
        kind: if top >= 2 { RowKind::Regular } else { RowKind::BeyondTop },
    }];
    for d in 2..=top {
        let faces = &layers[d - 1];
        let mut keys = HashSet::new();
        let mut completed = 0;
        let mut rejected = 0;
        for (s, sp) in faces.iter().tuple_combinations() {
            for i in 0..d {
                for ip in 0..d {
                    if without(s, i) != without(sp, ip) {
                        continue;
                    }
                    let (v, vp) = (s[i], sp[ip]);
                    if v == vp {
                        rejected += 1;
                        continue;
                    }
                    let mut edges = Vec::new();
                    if i <= ip {
                        edges.push((v, vp));
                    }
                    if ip <= i {
                        edges.push((vp, v));
                    }
                    for e in edges {
                        let (a, b) = if s <= sp { (s.clone(), sp.clone()) } else { (sp.clone(), s.clone()) };
                        if keys.insert((a, b, e)) && g.contains_edge(e.0, e.1) {
                            completed += 1;
                        }
                    }
                }
            }
        }
        rows.push(DimensionCensus {
            dim: d,
            simplices: Some(layers.get(d).map_or(0, |l| l.len() as u64)),
            almost: keys.len() as u64,
            completed,
            rejected_pairs: rejected,
            kind: if d < top { RowKind::Regular } else { RowKind::BeyondTop },
        });
    }
    Ok(CensusCounts { vertices: nv, edges: g.edge_count() as u64, rows, truncated: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn oracle_fixture_counts() {
        let c = brute_force_census(&g6(), DEFAULT_ORACLE_LIMIT).unwrap();
        assert_eq!((c.rows[1].almost, c.rows[1].completed), (8, 6));
        let c = brute_force_census(&g1(), DEFAULT_ORACLE_LIMIT).unwrap();
        let rows: Vec<_> = c.rows.iter().map(|r| (r.simplices, r.almost, r.completed)).collect();
        assert_eq!(rows, vec![(Some(3), 6, 3), (Some(1), 5, 3), (Some(0), 0, 0)]);
    }

    #[test]
    fn oracle_empty_and_oversized() {
        let c = brute_force_census(&DirectedGraph::empty(0), 10).unwrap();
        assert_eq!(c.rows.len(), 1);
        assert_eq!((c.rows[0].almost, c.rows[0].completed), (0, 0));
        assert_eq!(brute_force_census(&DirectedGraph::empty(11), 10), Err(GraphTooLarge { n: 11, limit: 10 }));
    }

    #[test]
    fn oracle_simplex_layers_of_example_one() {
        let layers = brute_force_simplices(&g4());
        assert_eq!(layers.iter().map(Vec::len).collect::<Vec<_>>(), vec![6, 8, 2]);
        assert_eq!(layers[2], vec![vec![0, 1, 2], vec![1, 3, 2]]);
    }
}
