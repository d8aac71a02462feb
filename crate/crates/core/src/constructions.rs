//! Explicit enabling graphs: the P₄ blow-up, the two-colour extremal graph,
//! the multicolour block graph and the prime slope graph.
//!
//! Every generator is deterministic; vertex order and block order are fixed
//! so that outputs are reproducible byte-for-byte.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{pair_count, pair_index, ColourId, EdgeColouredGraph, Vertex, VertexSet};
use crate::scalar::exact_sqrt;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error(
        "(sqrt({k1}-1) + sqrt({k2}-1))^2 = {} + 2*sqrt({}) is not an integer",
        k1 + k2 - 2,
        (k1 - 1) * (k2 - 1)
    )]
    NonIntegerOrder { k1: usize, k2: usize },
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("degree sums differ: {m1}*{d1} != {m2}*{d2}")]
    Handshake {
        m1: usize,
        m2: usize,
        d1: usize,
        d2: usize,
    },
    #[error("degree {degree} exceeds the opposite side size {side}")]
    DegreeTooLarge { degree: usize, side: usize },
    #[error("construction too large: {0} vertices")]
    TooLarge(usize),
}

/// Largest vertex count the generators will build.
pub const MAX_VERTICES: usize = 1 << 14;

fn at_least(what: &'static str, min: usize, got: usize) -> Result<(), ConstructionError> {
    if got < min {
        Err(ConstructionError::TooSmall { what, min, got })
    } else {
        Ok(())
    }
}

fn check_size(n: usize) -> Result<(), ConstructionError> {
    if n > MAX_VERTICES {
        Err(ConstructionError::TooLarge(n))
    } else {
        Ok(())
    }
}

fn graph_from_fn(
    n: usize,
    r: usize,
    colour: impl Fn(Vertex, Vertex) -> usize,
) -> EdgeColouredGraph {
    let mut colours = vec![0; pair_count(n)];
    for u in 0..n {
        for v in u + 1..n {
            colours[pair_index(n, u, v)] = colour(u, v);
        }
    }
    EdgeColouredGraph::build(n, r, colours).expect("generators emit valid colourings")
}

/// Sizes of the four blow-up parts; earlier parts take the remainder.
pub fn p4_part_sizes(n: usize) -> [usize; 4] {
    let (base, rem) = (n / 4, n % 4);
    std::array::from_fn(|i| base + usize::from(i < rem))
}

/// Blow-up of the red path V₁–V₂–V₃–V₄ where V₂ and V₃ are red cliques.
/// Every vertex lies in a red and a blue clique of size ⌊n/4⌋+1.
pub fn p4_blowup(n: usize) -> Result<EdgeColouredGraph, ConstructionError> {
    at_least("n", 4, n)?;
    check_size(n)?;
    let sizes = p4_part_sizes(n);
    let mut part = Vec::with_capacity(n);
    for (i, &size) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, size));
    }
    Ok(graph_from_fn(n, 2, |u, v| {
        let (a, b) = (part[u].min(part[v]), part[u].max(part[v]));
        let red = if a == b { a == 1 || a == 2 } else { b == a + 1 };
        if red {
            0
        } else {
            1
        }
    }))
}

/// Interval-wrap circulant: left vertex `i` joins right vertices
/// `(i·d1 + s) mod m2` for `s < d1`. The intervals tile ℤ_{m2} exactly `d2`
/// times, so every right vertex has degree `d2`.
pub fn biregular_bipartite(
    m1: usize,
    m2: usize,
    d1: usize,
    d2: usize,
) -> Result<Vec<(usize, usize)>, ConstructionError> {
    if m1 * d1 != m2 * d2 {
        return Err(ConstructionError::Handshake { m1, m2, d1, d2 });
    }
    if d1 > m2 {
        return Err(ConstructionError::DegreeTooLarge {
            degree: d1,
            side: m2,
        });
    }
    if d2 > m1 {
        return Err(ConstructionError::DegreeTooLarge {
            degree: d2,
            side: m1,
        });
    }
    let mut edges = Vec::with_capacity(m1 * d1);
    for i in 0..m1 {
        for s in 0..d1 {
            edges.push((i, (i * d1 + s) % m2));
        }
    }
    Ok(edges)
}

/// Parameters of the two-colour extremal graph: `k1 = 1 + g·a²`,
/// `k2 = 1 + g·b²` with `g = gcd(k1−1, k2−1)`, on `n = g(a+b)²` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoColourExtremalParams {
    pub k1: usize,
    pub k2: usize,
    pub g: usize,
    pub a: usize,
    pub b: usize,
    pub n: usize,
}

impl TwoColourExtremalParams {
    pub fn new(k1: usize, k2: usize) -> Result<Self, ConstructionError> {
        at_least("k1", 2, k1)?;
        at_least("k2", 2, k2)?;
        let g = (k1 - 1).gcd(&(k2 - 1));
        let a = exact_sqrt(((k1 - 1) / g) as u128);
        let b = exact_sqrt(((k2 - 1) / g) as u128);
        match (a, b) {
            (Some(a), Some(b)) => {
                let (a, b) = (a as usize, b as usize);
                Ok(Self {
                    k1,
                    k2,
                    g,
                    a,
                    b,
                    n: g * (a + b) * (a + b),
                })
            }
            _ => Err(ConstructionError::NonIntegerOrder { k1, k2 }),
        }
    }

    /// Size of the red clique part.
    pub fn red_part(&self) -> usize {
        self.g * self.a * (self.a + self.b)
    }

    /// Size of the blue clique part.
    pub fn blue_part(&self) -> usize {
        self.g * self.b * (self.a + self.b)
    }

    /// Red cross-degree of a red-part vertex.
    pub fn red_cross_degree(&self) -> usize {
        self.g * self.a * self.b
    }

    /// Red cross-degree of a blue-part vertex.
    pub fn blue_cross_degree(&self) -> usize {
        self.g * self.a * self.a
    }
}

/// Red clique R on vertices `0..|R|`, blue clique B on the rest, and red
/// cross edges on the biregular circulant between them.
pub fn two_colour_extremal(k1: usize, k2: usize) -> Result<EdgeColouredGraph, ConstructionError> {
    let params = TwoColourExtremalParams::new(k1, k2)?;
    check_size(params.n)?;
    let (red, blue) = (params.red_part(), params.blue_part());
    let cross = biregular_bipartite(
        red,
        blue,
        params.red_cross_degree(),
        params.blue_cross_degree(),
    )?;
    let n = params.n;
    let mut colours = vec![1; pair_count(n)];
    for u in 0..red {
        for v in u + 1..red {
            colours[pair_index(n, u, v)] = 0;
        }
    }
    for (left, right) in cross {
        colours[pair_index(n, left, red + right)] = 0;
    }
    Ok(EdgeColouredGraph::build(n, 2, colours).expect("valid colouring"))
}

/// `r` blocks of size `2(k−1)`, each a clique of its own colour. Between
/// blocks `i < j`, vertex `x` of block `i` takes colour `i` towards the
/// `k−1` partners `(x+s) mod 2(k−1)` of block `j` and colour `j` otherwise.
pub fn multicolour_blocks(r: usize, k: usize) -> Result<EdgeColouredGraph, ConstructionError> {
    at_least("r", 2, r)?;
    at_least("k", 2, k)?;
    let block = 2 * (k - 1);
    let n = r * block;
    check_size(n)?;
    if r > crate::graph::MAX_COLOURS {
        return Err(ConstructionError::TooLarge(n));
    }
    Ok(graph_from_fn(n, r, |u, v| {
        let (i, x) = (u / block, u % block);
        let (j, y) = (v / block, v % block);
        // Inside a block, or within the first k−1 circulant offsets.
        if i == j || (y + block - x) % block < k - 1 {
            i
        } else {
            j
        }
    }))
}

pub fn is_prime(p: usize) -> bool {
    if p < 2 {
        return false;
    }
    (2..)
        .take_while(|d| d * d <= p)
        .all(|d| !p.is_multiple_of(d))
}

fn mod_inverse(value: usize, p: usize) -> usize {
    let mut result = 1;
    let (mut base, mut exp) = (value % p, p - 2);
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// Vertex label of the point `(x, y)` of ℤ_p × ℤ_p.
pub fn prime_slope_label(p: usize, x: usize, y: usize) -> Vertex {
    x * p + y
}

/// Slope colouring of ℤ_p × ℤ_p with `p+1` colours: colour `s ∈ ℤ_p` for
/// the slope `(x−z)/(y−w)`, colour `p` when `y = w`.
pub fn prime_slope(p: usize) -> Result<EdgeColouredGraph, ConstructionError> {
    at_least("p", 2, p)?;
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    let n = p * p;
    check_size(n)?;
    if p + 1 > crate::graph::MAX_COLOURS {
        return Err(ConstructionError::TooLarge(n));
    }
    Ok(graph_from_fn(n, p + 1, |u, v| {
        let (x, y) = (u / p, u % p);
        let (z, w) = (v / p, v % p);
        if y == w {
            p
        } else {
            let dx = (x + p - z) % p;
            let dy = (y + p - w) % p;
            dx * mod_inverse(dy, p) % p
        }
    }))
}

/// The line of colour `i` through `(x, y)`: `{(x+i·t, y+t)}` for `i < p`,
/// `{(x+t, y)}` for `i = p`.
pub fn prime_slope_line(p: usize, i: usize, x: usize, y: usize) -> VertexSet {
    let members = (0..p)
        .map(|t| {
            if i < p {
                prime_slope_label(p, (x + i * t) % p, (y + t) % p)
            } else {
                prime_slope_label(p, (x + t) % p, y)
            }
        })
        .collect();
    VertexSet::new(members).expect("line points are distinct")
}

/// A named construction with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Family {
    P4Blowup { n: usize },
    TwoColourExtremal { k1: usize, k2: usize },
    MulticolourBlocks { r: usize, k: usize },
    PrimeSlope { p: usize },
}

/// Provenance attached to a generated graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionMeta {
    pub construction: String,
    pub params: BTreeMap<String, usize>,
    pub label_map: String,
}

#[derive(Clone, Debug)]
pub struct Constructed {
    pub family: Family,
    pub graph: EdgeColouredGraph,
    pub meta: ConstructionMeta,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::P4Blowup { .. } => "p4_blowup",
            Family::TwoColourExtremal { .. } => "two_colour_extremal",
            Family::MulticolourBlocks { .. } => "multicolour_blocks",
            Family::PrimeSlope { .. } => "prime_slope",
        }
    }

    pub fn build(&self) -> Result<Constructed, ConstructionError> {
        let graph = match *self {
            Family::P4Blowup { n } => p4_blowup(n)?,
            Family::TwoColourExtremal { k1, k2 } => two_colour_extremal(k1, k2)?,
            Family::MulticolourBlocks { r, k } => multicolour_blocks(r, k)?,
            Family::PrimeSlope { p } => prime_slope(p)?,
        };
        Ok(Constructed {
            family: *self,
            meta: self.meta(),
            graph,
        })
    }

    /// The (colour, clique size) requirements the construction satisfies.
    pub fn targets(&self) -> Vec<(ColourId, usize)> {
        match *self {
            Family::P4Blowup { n } => {
                let k = n / 4 + 1;
                vec![(ColourId(0), k), (ColourId(1), k)]
            }
            Family::TwoColourExtremal { k1, k2 } => vec![(ColourId(0), k1), (ColourId(1), k2)],
            Family::MulticolourBlocks { r, k } => (0..r).map(|c| (ColourId(c), k)).collect(),
            Family::PrimeSlope { p } => (0..=p).map(|c| (ColourId(c), p)).collect(),
        }
    }

    fn meta(&self) -> ConstructionMeta {
        let (params, label_map): (Vec<(&str, usize)>, String) = match *self {
            Family::P4Blowup { n } => {
                let sizes = p4_part_sizes(n);
                (
                    vec![("n", n)],
                    format!(
                        "parts V1..V4 consecutive with sizes {:?}; V2, V3 red cliques; V1-V2, V2-V3, V3-V4 red",
                        sizes
                    ),
                )
            }
            Family::TwoColourExtremal { k1, k2 } => {
                let p = TwoColourExtremalParams::new(k1, k2).ok();
                let (red, blue) = p.map_or((0, 0), |p| (p.red_part(), p.blue_part()));
                (
                    vec![("k1", k1), ("k2", k2)],
                    format!(
                        "vertices 0..{red} red clique R, {red}..{} blue clique B; cross edge (i, {red}+j) red iff j in [i*d1, i*d1+d1) mod |B|",
                        red + blue
                    ),
                )
            }
            Family::MulticolourBlocks { r, k } => (
                vec![("r", r), ("k", k)],
                format!(
                    "block i = vertices [i*{b}, (i+1)*{b}) in colour i; x in block i, y in block j>i: colour i iff (y-x) mod {b} < {}",
                    k - 1,
                    b = 2 * (k - 1)
                ),
            ),
            Family::PrimeSlope { p } => (
                vec![("p", p)],
                format!("(x,y) in Z_{p} x Z_{p} -> x*{p}+y; colour = slope (x-z)/(y-w) mod {p}, colour {p} when y=w"),
            ),
        };
        ConstructionMeta {
            construction: self.name().to_string(),
            params: params
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            label_map,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::P4Blowup { n } => write!(f, "p4_blowup({n})"),
            Family::TwoColourExtremal { k1, k2 } => write!(f, "two_colour_extremal({k1},{k2})"),
            Family::MulticolourBlocks { r, k } => write!(f, "multicolour_blocks({r},{k})"),
            Family::PrimeSlope { p } => write!(f, "prime_slope({p})"),
        }
    }
}

/// DOT colour for colour index `c`: red, blue, green, yellow, then hues
/// spaced by the golden angle.
pub fn palette(c: ColourId) -> String {
    const FIXED: [&str; 4] = ["red", "blue", "green", "yellow"];
    match FIXED.get(c.0) {
        Some(name) => name.to_string(),
        None => {
            let hue = ((c.0 - FIXED.len()) as f64 * 0.618_033_988_75).fract();
            format!("{hue:.3} 0.850 0.850")
        }
    }
}

/// Undirected DOT rendering with one edge per pair, coloured by
/// [`palette`]. Colours listed in `hidden` are left out.
pub fn to_dot(g: &EdgeColouredGraph, name: &str, hidden: &[ColourId]) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", name.replace('"', "\\\""));
    let _ = writeln!(out, "  node [shape=circle];");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let c = ColourId(g.colour(u, v));
            if !hidden.contains(&c) {
                let _ = writeln!(out, "  {u} -- {v} [color=\"{}\"];", palette(c));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// All `(k1, k2)` with `k1, k2 ≥ 2` whose extremal graph has at most
/// `max_n` vertices, in ascending `(k1, k2)` order.
pub fn extremal_pairs_up_to(max_n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    // n ≥ (k1−1) + (k2−1) + 2, so each k is below max_n.
    for k1 in 2..max_n {
        for k2 in 2..max_n {
            if let Ok(p) = TwoColourExtremalParams::new(k1, k2) {
                if p.n <= max_n {
                    pairs.push((k1, k2));
                }
            }
        }
    }
    pairs
}
