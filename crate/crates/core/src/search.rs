//! Exhaustive search for two-colour enabling graphs on few vertices.
//!
//! A two-colouring of `K_n` is an edge bitmask over the pairs in
//! upper-triangular order: bit `i` set means pair `i` is red (colour 0).
//! Masks are explored from the top bit down, trying 0 before 1, so leaves
//! come out in increasing numeric order and the first witness found is the
//! smallest one. Subtrees where some vertex can no longer reach red degree
//! `k1 − 1` or blue degree `k2 − 1` are cut as a whole.
//!
//! The top `shard_bits` bits split the space into independent shards run in
//! parallel. Once a shard finds a witness, later shards stop; earlier ones
//! run to completion, so the reported witness and counts do not depend on
//! scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::two_colour_lower;
use crate::graph::{pair_count, EdgeColouredGraph, Vertex};

/// Largest `n` with `n(n−1)/2 ≤ 63`.
pub const MAX_SEARCH_N: usize = 11;
pub const DEFAULT_SHARD_BITS: u32 = 6;
const PROGRESS_EVERY: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("n = {0} is too large for exhaustive search (at most {MAX_SEARCH_N})")]
    TooLarge(usize),
    #[error("{what} must be at least 1")]
    Zero { what: &'static str },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub shard_bits: u32,
    /// Degree-window pruning; turning it off checks every graph.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            shard_bits: DEFAULT_SHARD_BITS,
            prune: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub k1: usize,
    pub k2: usize,
    pub n: usize,
    pub found: bool,
    /// Red edges of the smallest witness mask.
    pub witness: Option<Vec<(Vertex, Vertex)>>,
    pub witness_mask: Option<u64>,
    /// Graphs passed to the clique check.
    pub graphs_enumerated: u64,
    /// Graphs discarded by the degree window without a clique check.
    pub graphs_pruned: u64,
    pub shards: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl SearchReport {
    pub fn witness_graph(&self) -> Option<EdgeColouredGraph> {
        self.witness.as_ref().map(|edges| {
            EdgeColouredGraph::from_simple_graph(self.n, edges).expect("valid edge list")
        })
    }

    /// Total number of masks on `n` vertices.
    pub fn space_size(&self) -> u128 {
        1u128 << pair_count(self.n)
    }
}

fn validate(n: usize, k1: usize, k2: usize) -> Result<(), SearchError> {
    if n == 0 {
        return Err(SearchError::Zero { what: "n" });
    }
    if k1 == 0 {
        return Err(SearchError::Zero { what: "k1" });
    }
    if k2 == 0 {
        return Err(SearchError::Zero { what: "k2" });
    }
    if n > MAX_SEARCH_N {
        return Err(SearchError::TooLarge(n));
    }
    Ok(())
}

/// Whether some `need` vertices of `cand` are pairwise adjacent.
fn has_clique(adj: &[u16], cand: u16, need: u32) -> bool {
    if need == 0 {
        return true;
    }
    let mut rest = cand;
    while rest.count_ones() >= need {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if has_clique(adj, rest & adj[u], need - 1) {
            return true;
        }
    }
    false
}

/// Clique check on a mask: every vertex in a red `k1`-clique and a blue
/// `k2`-clique.
fn mask_is_enabling(n: usize, pairs: &[(usize, usize)], mask: u64, k1: usize, k2: usize) -> bool {
    let mut red = [0u16; MAX_SEARCH_N];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        if mask >> i & 1 == 1 {
            red[u] |= 1 << v;
            red[v] |= 1 << u;
        }
    }
    let full: u16 = ((1u32 << n) - 1) as u16;
    let mut blue = [0u16; MAX_SEARCH_N];
    for v in 0..n {
        blue[v] = !red[v] & full & !(1 << v);
    }
    (0..n).all(|v| {
        has_clique(&red[..n], red[v], k1 as u32 - 1)
            && has_clique(&blue[..n], blue[v], k2 as u32 - 1)
    })
}

struct Shard<'a> {
    n: usize,
    k1: usize,
    k2: usize,
    prune: bool,
    pairs: &'a [(usize, usize)],
    index: usize,
    best: &'a AtomicUsize,
    red: [usize; MAX_SEARCH_N],
    open: [usize; MAX_SEARCH_N],
    enumerated: u64,
    pruned: u64,
    cancelled: bool,
}

#[derive(Default)]
struct ShardResult {
    witness: Option<u64>,
    enumerated: u64,
    pruned: u64,
}

impl Shard<'_> {
    fn in_window(&self, v: usize) -> bool {
        let assigned = self.n - 1 - self.open[v];
        let blue = assigned - self.red[v];
        self.red[v] + self.open[v] + 1 >= self.k1 && blue + self.open[v] + 1 >= self.k2
    }

    /// Colours pair `i`; returns whether both endpoints stay in the window.
    fn assign(&mut self, i: usize, is_red: bool) -> bool {
        let (u, v) = self.pairs[i];
        self.open[u] -= 1;
        self.open[v] -= 1;
        if is_red {
            self.red[u] += 1;
            self.red[v] += 1;
        }
        !self.prune || (self.in_window(u) && self.in_window(v))
    }

    fn unassign(&mut self, i: usize, is_red: bool) {
        let (u, v) = self.pairs[i];
        self.open[u] += 1;
        self.open[v] += 1;
        if is_red {
            self.red[u] -= 1;
            self.red[v] -= 1;
        }
    }

    /// Explores pairs `i−1, …, 0` below the fixed high bits of `mask`.
    fn descend(&mut self, i: usize, mask: u64) -> Option<u64> {
        if i == 0 {
            self.enumerated += 1;
            if self.enumerated.is_multiple_of(PROGRESS_EVERY) {
                log::info!("shard {}: {} graphs checked", self.index, self.enumerated);
                if self.best.load(Ordering::Relaxed) < self.index {
                    self.cancelled = true;
                }
            }
            return mask_is_enabling(self.n, self.pairs, mask, self.k1, self.k2).then_some(mask);
        }
        let i = i - 1;
        for is_red in [false, true] {
            if self.cancelled {
                return None;
            }
            let mask = if is_red { mask | 1 << i } else { mask };
            if self.assign(i, is_red) {
                if let Some(w) = self.descend(i, mask) {
                    self.unassign(i, is_red);
                    return Some(w);
                }
            } else {
                self.pruned += 1 << i;
            }
            self.unassign(i, is_red);
        }
        None
    }

    fn run(mut self, bits: usize) -> ShardResult {
        let m = self.pairs.len();
        let mut mask = 0u64;
        let mut viable = true;
        for j in 0..bits {
            let i = m - 1 - j;
            let is_red = self.index >> (bits - 1 - j) & 1 == 1;
            if is_red {
                mask |= 1 << i;
            }
            viable &= self.assign(i, is_red);
        }
        if !viable {
            return ShardResult {
                witness: None,
                enumerated: 0,
                pruned: 1 << (m - bits),
            };
        }
        let witness = self.descend(m - bits, mask);
        if witness.is_some() {
            self.best.fetch_min(self.index, Ordering::Relaxed);
        }
        ShardResult {
            witness,
            enumerated: self.enumerated,
            pruned: self.pruned,
        }
    }
}

/// Decides whether some `(k1, k2)`-enabling graph on `n` vertices exists,
/// returning the smallest witness mask if so.
pub fn exists_enabling(n: usize, k1: usize, k2: usize) -> Result<SearchReport, SearchError> {
    exists_enabling_with(n, k1, k2, SearchOptions::default())
}

pub fn exists_enabling_with(
    n: usize,
    k1: usize,
    k2: usize,
    options: SearchOptions,
) -> Result<SearchReport, SearchError> {
    validate(n, k1, k2)?;
    let start = Instant::now();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let bits = (options.shard_bits as usize).min(m);
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<ShardResult> = (0..1usize << bits)
        .into_par_iter()
        .map(|index| {
            if best.load(Ordering::Relaxed) < index {
                return ShardResult::default();
            }
            Shard {
                n,
                k1,
                k2,
                prune: options.prune,
                pairs: &pairs,
                index,
                best: &best,
                red: [0; MAX_SEARCH_N],
                open: [n - 1; MAX_SEARCH_N],
                enumerated: 0,
                pruned: 0,
                cancelled: false,
            }
            .run(bits)
        })
        .collect();
    // Shards after the first witness may have been cut short; their counts
    // depend on timing and are dropped.
    let last = results
        .iter()
        .position(|r| r.witness.is_some())
        .unwrap_or(results.len() - 1);
    let kept = &results[..=last];
    let witness_mask = kept[last].witness;
    let witness = witness_mask.map(|mask| {
        pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect()
    });
    Ok(SearchReport {
        k1,
        k2,
        n,
        found: witness_mask.is_some(),
        witness,
        witness_mask,
        graphs_enumerated: kept.iter().map(|r| r.enumerated).sum(),
        graphs_pruned: kept.iter().map(|r| r.pruned).sum(),
        shards: 1 << bits,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinNReport {
    pub k1: usize,
    pub k2: usize,
    pub n_max: usize,
    /// Least `n ≤ n_max` admitting an enabling graph.
    pub min_n: Option<usize>,
    /// Sizes skipped without searching because the closed-form bound rules
    /// them out; empty unless bounds were trusted.
    pub skipped: Vec<usize>,
    pub searches: Vec<SearchReport>,
}

/// Scans `n = max(k1, k2), …, n_max` for the first size admitting an
/// enabling graph. With `trust_bounds`, sizes below the closed-form lower
/// bound are skipped instead of searched.
pub fn min_n(
    k1: usize,
    k2: usize,
    n_max: usize,
    trust_bounds: bool,
    options: SearchOptions,
) -> Result<MinNReport, SearchError> {
    validate(n_max.max(1), k1, k2)?;
    let first = k1.max(k2);
    let floor = if trust_bounds {
        two_colour_lower(k1, k2).expect("k1, k2 ≥ 1") as usize
    } else {
        0
    };
    let mut report = MinNReport {
        k1,
        k2,
        n_max,
        min_n: None,
        skipped: Vec::new(),
        searches: Vec::new(),
    };
    for n in first..=n_max {
        if n < floor {
            report.skipped.push(n);
            continue;
        }
        let search = exists_enabling_with(n, k1, k2, options)?;
        let found = search.found;
        report.searches.push(search);
        if found {
            report.min_n = Some(n);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::verify_enabling;
    use crate::graph::ColourId;
    use proptest::prelude::*;

    fn assert_witness_verifies(report: &SearchReport) {
        let g = report.witness_graph().expect("witness");
        let ok = verify_enabling(
            &g,
            &[(ColourId::RED, report.k1), (ColourId::BLUE, report.k2)],
        )
        .unwrap()
        .ok;
        assert!(ok, "witness {:?} does not verify", report.witness);
    }

    /// Slow oracle: every mask, full verifier.
    fn brute_force(n: usize, k1: usize, k2: usize) -> Option<u64> {
        let pairs: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        (0..1u64 << pairs.len()).find(|&mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = EdgeColouredGraph::from_simple_graph(n, &edges).unwrap();
            verify_enabling(&g, &[(ColourId::RED, k1), (ColourId::BLUE, k2)])
                .unwrap()
                .ok
        })
    }

    #[test]
    fn small_cases() {
        let r = exists_enabling(4, 2, 2).unwrap();
        assert!(r.found);
        assert_witness_verifies(&r);
        assert_eq!(r.witness_mask, brute_force(4, 2, 2));

        let r = exists_enabling(3, 2, 2).unwrap();
        assert!(!r.found);
        assert_eq!(
            r.graphs_enumerated as u128 + r.graphs_pruned as u128,
            r.space_size()
        );

        let r = exists_enabling(6, 2, 3).unwrap();
        assert!(r.found);
        assert_witness_verifies(&r);
    }

    #[test]
    fn perfect_matching_witness() {
        let g = EdgeColouredGraph::from_simple_graph(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert!(
            verify_enabling(&g, &[(ColourId::RED, 2), (ColourId::BLUE, 3)])
                .unwrap()
                .ok
        );
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=5 {
            for k1 in 1..=3 {
                for k2 in 1..=3 {
                    let r = exists_enabling(n, k1, k2).unwrap();
                    assert_eq!(
                        r.witness_mask,
                        brute_force(n, k1, k2),
                        "n={n} k=({k1},{k2})"
                    );
                }
            }
        }
    }

    #[test]
    fn pruning_is_sound() {
        for n in 1..=5 {
            for k1 in 1..=3 {
                for k2 in 1..=3 {
                    let pruned = exists_enabling(n, k1, k2).unwrap();
                    let plain = exists_enabling_with(
                        n,
                        k1,
                        k2,
                        SearchOptions {
                            prune: false,
                            ..Default::default()
                        },
                    )
                    .unwrap();
                    assert_eq!(pruned.found, plain.found);
                    assert_eq!(pruned.witness_mask, plain.witness_mask);
                    assert_eq!(plain.graphs_pruned, 0);
                }
            }
        }
    }

    #[test]
    fn shard_count_does_not_change_the_answer() {
        let reference = exists_enabling_with(
            6,
            2,
            3,
            SearchOptions {
                shard_bits: 0,
                prune: true,
            },
        )
        .unwrap();
        for bits in [1, 3, 8, 15, 40] {
            let r = exists_enabling_with(
                6,
                2,
                3,
                SearchOptions {
                    shard_bits: bits,
                    prune: true,
                },
            )
            .unwrap();
            assert_eq!(r.witness_mask, reference.witness_mask);
            assert_eq!(r.graphs_enumerated, reference.graphs_enumerated);
            assert_eq!(r.graphs_pruned, reference.graphs_pruned);
        }
    }

    #[test]
    fn min_n_values() {
        let opts = SearchOptions::default();
        assert_eq!(min_n(2, 2, 6, false, opts).unwrap().min_n, Some(4));
        let r = min_n(2, 3, 8, false, opts).unwrap();
        assert_eq!(r.min_n, Some(6));
        assert_eq!(
            r.searches.iter().map(|s| s.n).collect::<Vec<_>>(),
            vec![3, 4, 5, 6]
        );
        assert_eq!(min_n(3, 2, 8, false, opts).unwrap().min_n, Some(6));
        assert_eq!(min_n(2, 2, 3, false, opts).unwrap().min_n, None);
        let trusted = min_n(2, 3, 8, true, opts).unwrap();
        assert_eq!(trusted.min_n, Some(6));
        assert_eq!(trusted.skipped, vec![3, 4, 5]);
    }

    #[test]
    fn search_agrees_with_lower_bound() {
        for k1 in 1..=3 {
            for k2 in 1..=3 {
                let lower = two_colour_lower(k1, k2).unwrap() as usize;
                for n in 1..=6 {
                    let r = exists_enabling(n, k1, k2).unwrap();
                    if n < lower {
                        assert!(!r.found, "n={n} below bound {lower} for ({k1},{k2})");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(exists_enabling(12, 2, 2), Err(SearchError::TooLarge(12)));
        assert_eq!(
            exists_enabling(0, 2, 2),
            Err(SearchError::Zero { what: "n" })
        );
        assert_eq!(
            exists_enabling(3, 0, 2),
            Err(SearchError::Zero { what: "k1" })
        );
        assert!(min_n(2, 2, 12, false, SearchOptions::default()).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn swapping_colours_mirrors_the_answer(n in 1usize..=6, k1 in 1usize..=3, k2 in 1usize..=3) {
            let a = exists_enabling(n, k1, k2).unwrap();
            let b = exists_enabling(n, k2, k1).unwrap();
            prop_assert_eq!(a.found, b.found);
            if a.found {
                assert_witness_verifies(&a);
                assert_witness_verifies(&b);
            }
        }
    }
}
