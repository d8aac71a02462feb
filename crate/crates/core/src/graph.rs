//! Edge-coloured complete graphs.
//!
//! A graph on `n` vertices with `r` colours stores one colour per unordered
//! pair in upper-triangular order `(0,1), (0,2), …, (0,n−1), (1,2), …,
//! (n−2,n−1)`. That flat sequence is also the JSON interchange format.
//!
//! For two-colour graphs colour 0 is "red" (edges of a simple graph, the
//! clique side) and colour 1 is "blue" (non-edges, the independent-set side).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::VertexBits;

pub type Vertex = usize;

/// Largest colour count representable by the compact colour storage.
pub const MAX_COLOURS: usize = 256;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("colour count must be between 1 and {MAX_COLOURS}, got {0}")]
    BadColourCount(usize),
    #[error("expected {expected} pair colours for n = {n}, got {got}")]
    LengthMismatch {
        n: usize,
        expected: usize,
        got: usize,
    },
    #[error("pair {index} has colour {colour}, but r = {r}")]
    ColourOutOfRange {
        index: usize,
        colour: usize,
        r: usize,
    },
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("pair ({0},{0}) is a loop")]
    Loop(Vertex),
    #[error("pair ({0},{1}) listed twice")]
    DuplicatePair(Vertex, Vertex),
    #[error("vertex {0} listed twice in a vertex set")]
    DuplicateVertex(Vertex),
    #[error("colour permutation is not a bijection on 0..{0}")]
    NotAPermutation(usize),
    #[error("vertex permutation is not a bijection on 0..{0}")]
    NotAVertexPermutation(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColourId(pub usize);

impl ColourId {
    pub const RED: ColourId = ColourId(0);
    pub const BLUE: ColourId = ColourId(1);

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ColourId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sorted, duplicate-free set of vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    /// Sorts `members`; rejects duplicates.
    pub fn new(mut members: Vec<Vertex>) -> Result<Self, GraphError> {
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        Ok(Self(members))
    }

    /// Caller guarantees strict ascending order.
    pub(crate) fn from_sorted_unchecked(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn members(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn intersection_size(&self, other: &VertexSet) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn check_in_range(&self, n: usize) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<Vertex>::deserialize(deserializer)?;
        VertexSet::new(members).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{u, v}` (with `u < v`) in upper-triangular order.
pub fn pair_index(n: usize, u: Vertex, v: Vertex) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Serialized form: `{"n": …, "r": …, "colours": […]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub r: usize,
    pub colours: Vec<usize>,
}

/// Complete graph on `n` vertices with an `r`-colouring of its pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct EdgeColouredGraph {
    n: usize,
    r: usize,
    colours: Vec<u8>,
    /// Colour-`c` neighbourhood of `v` at `c * n + v`.
    neighbours: Vec<VertexBits>,
}

impl EdgeColouredGraph {
    pub fn build(n: usize, r: usize, colours: Vec<usize>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        if r == 0 || r > MAX_COLOURS {
            return Err(GraphError::BadColourCount(r));
        }
        let expected = pair_count(n);
        if colours.len() != expected {
            return Err(GraphError::LengthMismatch {
                n,
                expected,
                got: colours.len(),
            });
        }
        if let Some((index, &colour)) = colours.iter().enumerate().find(|(_, &c)| c >= r) {
            return Err(GraphError::ColourOutOfRange { index, colour, r });
        }
        let colours = colours.into_iter().map(|c| c as u8).collect();
        Ok(Self::from_compact(n, r, colours))
    }

    fn from_compact(n: usize, r: usize, colours: Vec<u8>) -> Self {
        let mut neighbours = vec![VertexBits::empty(n); r * n];
        let mut index = 0;
        for u in 0..n {
            for v in u + 1..n {
                let c = colours[index] as usize;
                neighbours[c * n + u].insert(v);
                neighbours[c * n + v].insert(u);
                index += 1;
            }
        }
        Self {
            n,
            r,
            colours,
            neighbours,
        }
    }

    /// Two-colouring of `K_n`: listed pairs red (colour 0), all others blue.
    pub fn from_simple_graph(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut colours = vec![1u8; pair_count(n)];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            let slot = &mut colours[pair_index(n, u, v)];
            if *slot == 0 {
                return Err(GraphError::DuplicatePair(u, v));
            }
            *slot = 0;
        }
        Ok(Self::from_compact(n, 2, colours))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colour_sequence(&self) -> Vec<usize> {
        self.colours.iter().map(|&c| c as usize).collect()
    }

    pub fn colour_of(&self, u: Vertex, v: Vertex) -> Result<ColourId, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        Ok(ColourId(self.colour(u, v)))
    }

    /// Unchecked lookup for distinct in-range vertices.
    #[inline]
    pub fn colour(&self, u: Vertex, v: Vertex) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colours[pair_index(self.n, a, b)] as usize
    }

    /// Colour-`c` neighbours of `v`.
    pub fn neighbourhood(&self, c: ColourId, v: Vertex) -> &VertexBits {
        &self.neighbours[c.0 * self.n + v]
    }

    pub fn degree(&self, c: ColourId, v: Vertex) -> usize {
        self.neighbourhood(c, v).len()
    }

    pub fn check_colour(&self, c: ColourId) -> Result<(), GraphError> {
        if c.0 < self.r {
            Ok(())
        } else {
            Err(GraphError::ColourOutOfRange {
                index: 0,
                colour: c.0,
                r: self.r,
            })
        }
    }

    /// True iff every pair inside `s` has colour `c`; sets of size at most
    /// one are trivially monochromatic. Sets with vertices outside the graph
    /// are never cliques of it.
    pub fn is_monochromatic_clique(&self, s: &VertexSet, c: ColourId) -> bool {
        if s.check_in_range(self.n).is_err() {
            return false;
        }
        let m = s.members();
        m.iter().enumerate().all(|(i, &u)| {
            m[i + 1..]
                .iter()
                .all(|&v| self.colours[pair_index(self.n, u, v)] as usize == c.0)
        })
    }

    /// Maps every pair colour `c` to `perm[c]`.
    pub fn permute_colours(&self, perm: &[usize]) -> Result<Self, GraphError> {
        if !is_permutation(perm, self.r) {
            return Err(GraphError::NotAPermutation(self.r));
        }
        let colours = self
            .colours
            .iter()
            .map(|&c| perm[c as usize] as u8)
            .collect();
        Ok(Self::from_compact(self.n, self.r, colours))
    }

    /// Moves vertex `v` to label `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[Vertex]) -> Result<Self, GraphError> {
        if !is_permutation(perm, self.n) {
            return Err(GraphError::NotAVertexPermutation(self.n));
        }
        let mut colours = vec![0u8; self.colours.len()];
        for u in 0..self.n {
            for v in u + 1..self.n {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                colours[pair_index(self.n, a, b)] = self.colours[pair_index(self.n, u, v)];
            }
        }
        Ok(Self::from_compact(self.n, self.r, colours))
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            n: self.n,
            r: self.r,
            colours: self.colour_sequence(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn is_permutation(perm: &[usize], size: usize) -> bool {
    if perm.len() != size {
        return false;
    }
    let mut seen = vec![false; size];
    perm.iter()
        .all(|&p| p < size && !std::mem::replace(&mut seen[p], true))
}

impl TryFrom<GraphDoc> for EdgeColouredGraph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, Self::Error> {
        Self::build(doc.n, doc.r, doc.colours)
    }
}

impl From<EdgeColouredGraph> for GraphDoc {
    fn from(graph: EdgeColouredGraph) -> Self {
        graph.to_doc()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p4() -> EdgeColouredGraph {
        EdgeColouredGraph::from_simple_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn build_k2() {
        let g = EdgeColouredGraph::build(2, 2, vec![0]).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.colour_of(0, 1), Ok(ColourId(0)));
    }

    #[test]
    fn build_p4_matches_simple_graph() {
        // (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
        let g = EdgeColouredGraph::build(4, 2, vec![0, 1, 1, 0, 1, 0]).unwrap();
        assert_eq!(g, p4());
    }

    #[test]
    fn build_rejects_bad_length_and_colour() {
        assert_eq!(
            EdgeColouredGraph::build(3, 2, vec![0, 1]),
            Err(GraphError::LengthMismatch {
                n: 3,
                expected: 3,
                got: 2
            })
        );
        assert_eq!(
            EdgeColouredGraph::build(3, 2, vec![0, 2, 1]),
            Err(GraphError::ColourOutOfRange {
                index: 1,
                colour: 2,
                r: 2
            })
        );
        assert_eq!(
            EdgeColouredGraph::build(0, 2, vec![]),
            Err(GraphError::NoVertices)
        );
        assert_eq!(
            EdgeColouredGraph::build(2, 0, vec![0]),
            Err(GraphError::BadColourCount(0))
        );
    }

    #[test]
    fn simple_graph_single_vertex() {
        let g = EdgeColouredGraph::from_simple_graph(1, &[]).unwrap();
        assert_eq!(g.n(), 1);
        assert!(g.colour_sequence().is_empty());
    }

    #[test]
    fn simple_graph_errors() {
        assert_eq!(
            EdgeColouredGraph::from_simple_graph(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            EdgeColouredGraph::from_simple_graph(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicatePair(0, 1))
        );
        assert_eq!(
            EdgeColouredGraph::from_simple_graph(3, &[(2, 2)]),
            Err(GraphError::Loop(2))
        );
    }

    #[test]
    fn perfect_matching_complement_is_tripartite() {
        let g = EdgeColouredGraph::from_simple_graph(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert!(g.is_monochromatic_clique(&set(&[0, 2, 4]), ColourId::BLUE));
        assert!(g.is_monochromatic_clique(&set(&[1, 3, 5]), ColourId::BLUE));
        assert!(!g.is_monochromatic_clique(&set(&[0, 1, 4]), ColourId::BLUE));
    }

    #[test]
    fn colour_lookup() {
        let g = p4();
        assert_eq!(g.colour_of(0, 1), Ok(ColourId(0)));
        assert_eq!(g.colour_of(0, 2), Ok(ColourId(1)));
        assert_eq!(g.colour_of(2, 2), Err(GraphError::Loop(2)));
        assert_eq!(
            g.colour_of(0, 4),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 4 })
        );
    }

    #[test]
    fn monochromatic_cliques_on_p4() {
        let g = p4();
        assert!(g.is_monochromatic_clique(&set(&[0, 1]), ColourId::RED));
        assert!(!g.is_monochromatic_clique(&set(&[0, 1, 2]), ColourId::RED));
        assert!(g.is_monochromatic_clique(&set(&[2]), ColourId::RED));
        assert!(g.is_monochromatic_clique(&set(&[]), ColourId::BLUE));
        assert!(!g.is_monochromatic_clique(&set(&[0, 9]), ColourId::RED));
    }

    #[test]
    fn swapping_colours_complements_p4() {
        let g = p4();
        let swapped = g.permute_colours(&[1, 0]).unwrap();
        // Vertex 0 has blue edges in P4, so it now has a colour-0 edge.
        assert!(swapped.is_monochromatic_clique(&set(&[0, 2]), ColourId::RED));
        assert_eq!(g.permute_colours(&[0, 1]).unwrap(), g);
        assert_eq!(
            g.permute_colours(&[0, 0]),
            Err(GraphError::NotAPermutation(2))
        );
        assert_eq!(g.permute_colours(&[0]), Err(GraphError::NotAPermutation(2)));
    }

    #[test]
    fn vertex_set_rejects_duplicates() {
        assert_eq!(
            VertexSet::new(vec![3, 1, 3]),
            Err(GraphError::DuplicateVertex(3))
        );
        assert_eq!(set(&[3, 1, 2]).members(), &[1, 2, 3]);
        assert_eq!(set(&[1, 2, 5]).intersection_size(&set(&[0, 2, 5, 7])), 2);
    }

    #[test]
    fn json_format() {
        let g = p4();
        assert_eq!(g.to_json(), r#"{"n":4,"r":2,"colours":[0,1,1,0,1,0]}"#);
        let err = EdgeColouredGraph::from_json(r#"{"n":3,"r":2,"colours":[0]}"#);
        assert!(err.is_err());
    }

    fn arb_graph() -> impl Strategy<Value = EdgeColouredGraph> {
        (1usize..12, 1usize..5).prop_flat_map(|(n, r)| {
            proptest::collection::vec(0..r, pair_count(n))
                .prop_map(move |colours| EdgeColouredGraph::build(n, r, colours).unwrap())
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(g in arb_graph()) {
            let back = EdgeColouredGraph::from_json(&g.to_json()).unwrap();
            prop_assert_eq!(back.colour_sequence(), g.colour_sequence());
            prop_assert_eq!(back, g);
        }

        #[test]
        fn lookup_is_symmetric(g in arb_graph()) {
            for u in 0..g.n() {
                for v in 0..g.n() {
                    if u != v {
                        prop_assert_eq!(g.colour_of(u, v).unwrap(), g.colour_of(v, u).unwrap());
                    }
                }
            }
        }

        #[test]
        fn involution_twice_is_identity(g in arb_graph(), a in 0usize..4, b in 0usize..4) {
            let r = g.r();
            let mut perm: Vec<usize> = (0..r).collect();
            perm.swap(a % r, b % r);
            let twice = g.permute_colours(&perm).unwrap().permute_colours(&perm).unwrap();
            prop_assert_eq!(twice.colour_sequence(), g.colour_sequence());
        }

        #[test]
        fn cliques_are_downward_closed(g in arb_graph(), mask in 0u32..4096, c in 0usize..4) {
            let c = ColourId(c % g.r());
            let members: Vec<usize> = (0..g.n()).filter(|v| mask & (1 << v) != 0).collect();
            let s = VertexSet::new(members.clone()).unwrap();
            if g.is_monochromatic_clique(&s, c) {
                for drop in 0..members.len() {
                    let mut sub = members.clone();
                    sub.remove(drop);
                    prop_assert!(g.is_monochromatic_clique(&VertexSet::new(sub).unwrap(), c));
                }
            }
        }
    }
}
