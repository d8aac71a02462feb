//! Exact search for fixed-size monochromatic cliques.
//!
//! All searches extend cliques in ascending label order, so the first hit of
//! a depth-first search is the lexicographically smallest clique and every
//! clique is produced exactly once by enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bits::VertexBits;
use crate::graph::{ColourId, EdgeColouredGraph, GraphError, Vertex, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliqueError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("clique size must be at least 1")]
    ZeroSize,
    #[error("colour {0} appears twice in the targets")]
    DuplicateTargetColour(ColourId),
    #[error("vertex {vertex} lies in no colour-{colour} clique of size {k}")]
    Uncovered {
        vertex: Vertex,
        colour: ColourId,
        k: usize,
    },
    #[error("more than {limit} colour-{colour} cliques of size {k}")]
    TooManyCliques {
        colour: ColourId,
        k: usize,
        limit: usize,
    },
}

/// How a clique family is selected for one colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyPolicy {
    /// One clique per vertex: the lexicographically smallest one through it.
    #[serde(rename = "lex")]
    PerVertexLex,
    /// Every clique of the given size and colour.
    #[serde(rename = "all")]
    AllCliques,
}

/// Cap on explicit enumeration for the all-cliques policy.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 250_000;

/// Size-`k` colour-`c` cliques used as LP input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueFamily {
    pub colour: ColourId,
    pub k: usize,
    /// Lexicographically sorted, duplicate-free.
    pub cliques: Vec<VertexSet>,
    /// For each vertex, the index of its designated clique, if covered.
    pub designated: Vec<Option<usize>>,
}

impl CliqueFamily {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn covers_all(&self) -> bool {
        self.designated.iter().all(Option::is_some)
    }

    /// Checks the family invariants against `g`; returns a description of
    /// the first violation.
    pub fn validate(&self, g: &EdgeColouredGraph) -> Result<(), String> {
        if self.designated.len() != g.n() {
            return Err(format!(
                "designated map has {} entries for {} vertices",
                self.designated.len(),
                g.n()
            ));
        }
        for (i, clique) in self.cliques.iter().enumerate() {
            if clique.len() != self.k {
                return Err(format!("clique {clique} does not have size {}", self.k));
            }
            if !g.is_monochromatic_clique(clique, self.colour) {
                return Err(format!("{clique} is not a colour-{} clique", self.colour));
            }
            if i > 0 && self.cliques[i - 1] >= *clique {
                return Err(format!("cliques not strictly sorted at {clique}"));
            }
        }
        for (v, slot) in self.designated.iter().enumerate() {
            if let Some(index) = *slot {
                match self.cliques.get(index) {
                    Some(clique) if clique.contains(v) => {}
                    _ => {
                        return Err(format!(
                            "designated clique of vertex {v} does not contain it"
                        ))
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_query(g: &EdgeColouredGraph, c: ColourId, k: usize) -> Result<(), CliqueError> {
    g.check_colour(c)?;
    if k == 0 {
        return Err(CliqueError::ZeroSize);
    }
    Ok(())
}

/// Depth-first extension of `chosen` by `need` more vertices from
/// `candidates`, ascending. Returns true at the first completed clique.
fn extend_first(
    g: &EdgeColouredGraph,
    c: ColourId,
    chosen: &mut Vec<Vertex>,
    candidates: &VertexBits,
    need: usize,
) -> bool {
    if need == 0 {
        return true;
    }
    let order: Vec<Vertex> = candidates.iter().collect();
    for (i, &u) in order.iter().enumerate() {
        if order.len() - i < need {
            return false;
        }
        let mut next = candidates.intersection(g.neighbourhood(c, u));
        next.retain_above(u);
        if next.len() + 1 < need {
            continue;
        }
        chosen.push(u);
        if extend_first(g, c, chosen, &next, need - 1) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Lexicographically smallest size-`k` colour-`c` clique containing `v`.
pub fn find_clique_containing(
    g: &EdgeColouredGraph,
    c: ColourId,
    v: Vertex,
    k: usize,
) -> Result<Option<VertexSet>, CliqueError> {
    check_query(g, c, k)?;
    if v >= g.n() {
        return Err(GraphError::VertexOutOfRange {
            vertex: v,
            n: g.n(),
        }
        .into());
    }
    let mut chosen = Vec::with_capacity(k);
    if !extend_first(g, c, &mut chosen, g.neighbourhood(c, v), k - 1) {
        return Ok(None);
    }
    chosen.push(v);
    chosen.sort_unstable();
    Ok(Some(VertexSet::from_sorted_unchecked(chosen)))
}

fn extend_all(
    g: &EdgeColouredGraph,
    c: ColourId,
    chosen: &mut Vec<Vertex>,
    candidates: &VertexBits,
    need: usize,
    out: &mut Vec<VertexSet>,
    limit: usize,
) -> bool {
    if need == 0 {
        if out.len() == limit {
            return false;
        }
        out.push(VertexSet::from_sorted_unchecked(chosen.clone()));
        return true;
    }
    let order: Vec<Vertex> = candidates.iter().collect();
    for (i, &u) in order.iter().enumerate() {
        if order.len() - i < need {
            break;
        }
        let mut next = candidates.intersection(g.neighbourhood(c, u));
        next.retain_above(u);
        if next.len() + 1 < need {
            continue;
        }
        chosen.push(u);
        let within_limit = extend_all(g, c, chosen, &next, need - 1, out, limit);
        chosen.pop();
        if !within_limit {
            return false;
        }
    }
    true
}

/// Every size-`k` colour-`c` clique, in lexicographic order.
pub fn enumerate_cliques(
    g: &EdgeColouredGraph,
    c: ColourId,
    k: usize,
) -> Result<Vec<VertexSet>, CliqueError> {
    enumerate_cliques_limited(g, c, k, usize::MAX)
}

/// As [`enumerate_cliques`], failing once more than `limit` cliques exist.
pub fn enumerate_cliques_limited(
    g: &EdgeColouredGraph,
    c: ColourId,
    k: usize,
    limit: usize,
) -> Result<Vec<VertexSet>, CliqueError> {
    check_query(g, c, k)?;
    let mut all = VertexBits::empty(g.n());
    for v in 0..g.n() {
        all.insert(v);
    }
    let mut out = Vec::new();
    if extend_all(g, c, &mut Vec::with_capacity(k), &all, k, &mut out, limit) {
        Ok(out)
    } else {
        Err(CliqueError::TooManyCliques {
            colour: c,
            k,
            limit,
        })
    }
}

/// Outcome of checking per-vertex clique requirements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnablingReport {
    pub targets: Vec<(ColourId, usize)>,
    pub ok: bool,
    /// One entry per (vertex, target), vertex-major in target order.
    pub witnesses: Vec<((Vertex, ColourId), Option<VertexSet>)>,
    pub first_failure: Option<(Vertex, ColourId)>,
}

impl EnablingReport {
    pub fn witness(&self, v: Vertex, c: ColourId) -> Option<&VertexSet> {
        self.witnesses
            .iter()
            .find(|((u, d), _)| *u == v && *d == c)
            .and_then(|(_, w)| w.as_ref())
    }
}

struct WitnessMap<'a>(&'a [((Vertex, ColourId), Option<VertexSet>)]);

impl Serialize for WitnessMap<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for ((v, c), witness) in self.0 {
            map.serialize_entry(&format!("{v},{c}"), witness)?;
        }
        map.end()
    }
}

impl Serialize for EnablingReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EnablingReport", 4)?;
        s.serialize_field("ok", &self.ok)?;
        s.serialize_field("targets", &self.targets)?;
        s.serialize_field("witnesses", &WitnessMap(&self.witnesses))?;
        s.serialize_field("first_failure", &self.first_failure)?;
        s.end()
    }
}

pub fn check_targets(
    g: &EdgeColouredGraph,
    targets: &[(ColourId, usize)],
) -> Result<(), CliqueError> {
    let mut seen = BTreeSet::new();
    for &(c, k) in targets {
        check_query(g, c, k)?;
        if !seen.insert(c) {
            return Err(CliqueError::DuplicateTargetColour(c));
        }
    }
    Ok(())
}

/// Finds a witness clique for every (vertex, target) pair. Searches run in
/// parallel; the report is independent of scheduling.
pub fn verify_enabling(
    g: &EdgeColouredGraph,
    targets: &[(ColourId, usize)],
) -> Result<EnablingReport, CliqueError> {
    check_targets(g, targets)?;
    let witnesses: Vec<_> = (0..g.n())
        .into_par_iter()
        .flat_map_iter(|v| {
            targets.iter().map(move |&(c, k)| {
                let found = find_clique_containing(g, c, v, k).expect("query validated");
                ((v, c), found)
            })
        })
        .collect();
    let first_failure = witnesses
        .iter()
        .find(|(_, w)| w.is_none())
        .map(|(key, _)| *key);
    Ok(EnablingReport {
        targets: targets.to_vec(),
        ok: first_failure.is_none(),
        witnesses,
        first_failure,
    })
}

/// Selects the clique family for colour `c` under `policy`.
pub fn choose_family(
    g: &EdgeColouredGraph,
    c: ColourId,
    k: usize,
    policy: FamilyPolicy,
) -> Result<CliqueFamily, CliqueError> {
    choose_family_limited(g, c, k, policy, DEFAULT_ENUMERATION_LIMIT)
}

pub fn choose_family_limited(
    g: &EdgeColouredGraph,
    c: ColourId,
    k: usize,
    policy: FamilyPolicy,
    limit: usize,
) -> Result<CliqueFamily, CliqueError> {
    check_query(g, c, k)?;
    let per_vertex: Vec<Option<VertexSet>> = (0..g.n())
        .into_par_iter()
        .map(|v| find_clique_containing(g, c, v, k).expect("query validated"))
        .collect();
    let cliques = match policy {
        FamilyPolicy::PerVertexLex => {
            if let Some(v) = per_vertex.iter().position(Option::is_none) {
                return Err(CliqueError::Uncovered {
                    vertex: v,
                    colour: c,
                    k,
                });
            }
            let unique: BTreeSet<VertexSet> = per_vertex.iter().flatten().cloned().collect();
            unique.into_iter().collect::<Vec<_>>()
        }
        FamilyPolicy::AllCliques => enumerate_cliques_limited(g, c, k, limit)?,
    };
    let designated = per_vertex
        .iter()
        .map(|w| {
            w.as_ref().map(|w| {
                cliques
                    .binary_search(w)
                    .expect("lex witness is in the family")
            })
        })
        .collect();
    Ok(CliqueFamily {
        colour: c,
        k,
        cliques,
        designated,
    })
}
