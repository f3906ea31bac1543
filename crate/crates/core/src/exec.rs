//! Execution backends for the data-parallel loops.
//!
//! Every hot loop in the crate is written as a map over index ranges followed
//! by either an ordered concatenation or an associative reduction. With the
//! `parallel` feature the ranges are handed to rayon; otherwise they run in
//! order on the calling thread. Both paths produce identical results: ordered
//! maps are concatenated by chunk index and reductions only combine integer or
//! exact-rational partials.

use std::ops::Range;

/// Which executor runs the range loops.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Backend::Parallel => "parallel",
        }
    }
}

fn chunk_ranges(len: usize, grain: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    let grain = grain.max(1);
    let chunks = len.div_ceil(grain);
    (0..chunks).map(move |c| c * grain..((c + 1) * grain).min(len))
}

/// Maps `f` over `0..len` in chunks of `grain` and concatenates the outputs in
/// chunk order.
pub fn map_ordered<U, F>(backend: Backend, len: usize, grain: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(Range<usize>) -> Vec<U> + Sync + Send,
{
    match backend {
        Backend::Sequential => {
            let mut out = Vec::new();
            for r in chunk_ranges(len, grain) {
                out.extend(f(r));
            }
            out
        }
        #[cfg(feature = "parallel")]
        Backend::Parallel => {
            use rayon::prelude::*;
            let ranges: Vec<Range<usize>> = chunk_ranges(len, grain).collect();
            let parts: Vec<Vec<U>> = ranges.into_par_iter().map(&f).collect();
            let total = parts.iter().map(Vec::len).sum();
            let mut out = Vec::with_capacity(total);
            for p in parts {
                out.extend(p);
            }
            out
        }
    }
}

/// Maps `f` over `0..len` in chunks and folds the partial results with an
/// associative `combine`.
pub fn reduce_ranges<A, F, C>(backend: Backend, len: usize, grain: usize, identity: A, f: F, combine: C) -> A
where
    A: Send + Clone + Sync,
    F: Fn(Range<usize>) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    match backend {
        Backend::Sequential => chunk_ranges(len, grain).fold(identity, |acc, r| combine(acc, f(r))),
        #[cfg(feature = "parallel")]
        Backend::Parallel => {
            use rayon::prelude::*;
            let ranges: Vec<Range<usize>> = chunk_ranges(len, grain).collect();
            ranges.into_par_iter().map(&f).reduce(|| identity.clone(), &combine)
        }
    }
}
