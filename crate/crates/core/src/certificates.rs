//! Exact LP certificates for the lower bounds on enabling graphs.
//!
//! For each colour `i` with clique family `𝒞ᵢ`:
//!
//! * `δᵢ = max_λ min_{C∈𝒞ᵢ} λ(C)` over probability measures `λ` on the
//!   vertices, together with a maximiser `λ*`;
//! * a probability measure `μᵢ` on `𝒞ᵢ` whose per-vertex mass
//!   `μᵢ(v) = μᵢ({C ∋ v})` never exceeds `δᵢ`, obtained from the packing LP
//!   `max Σ μ(C)` subject to `μ(v) ≤ δᵢ`, whose optimum is at least 1.
//!
//! `λ*` and `μᵢ` certify each other: `λ*` shows `δᵢ` is attained, and for
//! any probability measure `λ`, `min_C λ(C) ≤ Σ_C μᵢ(C)λ(C) = Σ_v λ(v)μᵢ(v)
//! ≤ δᵢ`, so `μᵢ` shows nothing larger is. [`check_certificate`] re-verifies
//! a stored certificate this way without solving any LP.
//!
//! Across colours the pipeline checks `δᵢ + δⱼ ≤ 1` and
//! `Σ_v μᵢ(v)μⱼ(v) ≤ 1`, then turns the δ's into a lower bound on `n`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{f_max_arg, BoundError, Surd};
use crate::clique::{
    check_targets, choose_family_limited, verify_enabling, CliqueError, CliqueFamily, FamilyPolicy,
};
use crate::exact_json::{rational, rational_vec};
use crate::graph::{pair_index, ColourId, EdgeColouredGraph, Vertex, VertexSet};
use crate::lp::{LinearProgram, LpError, LpSolution, Relation, Sense};
use crate::scalar::{int, ratio};
use crate::Rational;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("clique family for colour {0} is empty")]
    EmptyFamily(ColourId),
    #[error("both families have colour {0}")]
    SameColour(ColourId),
    #[error("graph is not enabling: vertex {vertex} has no colour-{colour} witness")]
    NotEnabling { vertex: Vertex, colour: ColourId },
    #[error("targets must name every colour 0..{r} exactly once")]
    IncompleteTargets { r: usize },
    #[error("multicolour bounds need one clique size for every colour, got {0:?}")]
    MixedCliqueSizes(Vec<usize>),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("delta1 + delta2 = {0} exceeds 1")]
    DeltaSumExceedsOne(String),
    #[error("deltas must be positive")]
    NonPositiveDelta,
    #[error("certificate does not match the graph: {0}")]
    Mismatch(String),
    /// A proved inequality failed on exact values: a bug, never a property
    /// of the input.
    #[error("internal inconsistency in {check}: {detail}")]
    Inconsistency { check: &'static str, detail: String },
}

impl CertifyError {
    /// True when the error signals a falsified invariant rather than bad
    /// input or a negative answer.
    pub fn is_inconsistency(&self) -> bool {
        matches!(self, CertifyError::Inconsistency { .. })
    }
}

/// Cap on the family size fed to the dense exact simplex; larger
/// all-cliques families exhaust memory long before they finish.
pub const MAX_LP_FAMILY: usize = 5_000;

fn inconsistency(check: &'static str, detail: String) -> CertifyError {
    CertifyError::Inconsistency { check, detail }
}

fn sum(values: impl IntoIterator<Item = Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Probability measure on the vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMeasure {
    #[serde(with = "rational_vec")]
    pub weights: Vec<Rational>,
}

impl VertexMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self, CertifyError> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(CertifyError::InvalidMeasure(format!("negative weight {w}")));
        }
        let total = sum(weights.iter().cloned());
        if !total.is_one() {
            return Err(CertifyError::InvalidMeasure(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![ratio(1, n as i64); n],
        }
    }

    pub fn mass(&self, s: &VertexSet) -> Rational {
        sum(s.members().iter().map(|&v| self.weights[v].clone()))
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::new(
            (0..self.weights.len())
                .filter(|&v| !self.weights[v].is_zero())
                .collect(),
        )
        .expect("indices are distinct")
    }

    /// `min_{C ∈ fam} λ(C)`.
    pub fn min_clique_mass(&self, fam: &CliqueFamily) -> Option<Rational> {
        fam.cliques.iter().map(|c| self.mass(c)).min()
    }
}

/// Probability measure on the cliques of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMeasure {
    #[serde(with = "rational_vec")]
    pub weights: Vec<Rational>,
}

impl FamilyMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self, CertifyError> {
        VertexMeasure::new(weights).map(|m| Self { weights: m.weights })
    }

    /// `μ(v)`: total weight of the cliques containing `v`.
    pub fn vertex_masses(&self, fam: &CliqueFamily, n: usize) -> Vec<Rational> {
        let mut masses = vec![Rational::zero(); n];
        for (clique, w) in fam.cliques.iter().zip(&self.weights) {
            if w.is_zero() {
                continue;
            }
            for &v in clique.members() {
                masses[v] += w;
            }
        }
        masses
    }
}

/// Objective values and size of one solved LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpAudit {
    #[serde(with = "rational")]
    pub primal_value: Rational,
    #[serde(with = "rational")]
    pub dual_value: Rational,
    pub variables: usize,
    pub constraints: usize,
    pub pivots: usize,
}

impl LpAudit {
    fn of(lp: &LinearProgram<Rational>, s: &LpSolution<Rational>) -> Self {
        Self {
            primal_value: s.value.clone(),
            dual_value: s.dual_value.clone(),
            variables: lp.num_vars,
            constraints: lp.constraints.len(),
            pivots: s.pivots,
        }
    }

    pub fn strong_duality_holds(&self) -> bool {
        self.primal_value == self.dual_value
    }
}

fn check_family(g: &EdgeColouredGraph, fam: &CliqueFamily) -> Result<(), CertifyError> {
    if fam.is_empty() {
        return Err(CertifyError::EmptyFamily(fam.colour));
    }
    fam.validate(g).map_err(CertifyError::Mismatch)
}

#[derive(Clone, Debug)]
pub struct DeltaSolution {
    pub delta: Rational,
    pub lambda_star: VertexMeasure,
    pub audit: LpAudit,
}

/// Solves `max t` subject to `λ(C) ≥ t` for every `C` in the family,
/// `Σ λ = 1`, `λ ≥ 0`.
pub fn compute_delta(
    g: &EdgeColouredGraph,
    fam: &CliqueFamily,
) -> Result<DeltaSolution, CertifyError> {
    check_family(g, fam)?;
    let n = g.n();
    let t = n;
    let mut objective = vec![Rational::zero(); n + 1];
    objective[t] = int(1);
    let mut lp = LinearProgram::new(n + 1, Sense::Maximise, objective);
    for clique in &fam.cliques {
        let mut row = vec![(t, int(1))];
        row.extend(clique.members().iter().map(|&v| (v, int(-1))));
        lp.add_constraint(row, Relation::Le, Rational::zero());
    }
    lp.add_constraint((0..n).map(|v| (v, int(1))).collect(), Relation::Eq, int(1));
    let solution = lp.solve()?;
    let lambda_star = VertexMeasure::new(solution.primal[..n].to_vec())?;
    let delta = solution.value.clone();
    let attained = lambda_star
        .min_clique_mass(fam)
        .expect("family is non-empty");
    if attained != delta {
        return Err(inconsistency(
            "delta_attained",
            format!("min over cliques of lambda* is {attained}, LP value {delta}"),
        ));
    }
    Ok(DeltaSolution {
        delta,
        lambda_star,
        audit: LpAudit::of(&lp, &solution),
    })
}

#[derive(Clone, Debug)]
pub struct MuSolution {
    pub mu: FamilyMeasure,
    /// Optimum of the packing LP before normalisation.
    pub packing_value: Rational,
    pub vertex_mass: Vec<Rational>,
    pub audit: LpAudit,
}

/// Solves the packing LP `max Σ μ(C)` subject to `μ(v) ≤ δ` for every
/// vertex, requires the optimum to be at least 1, and normalises.
pub fn construct_mu(
    g: &EdgeColouredGraph,
    fam: &CliqueFamily,
    delta: &Rational,
) -> Result<MuSolution, CertifyError> {
    check_family(g, fam)?;
    if !delta.is_positive() {
        return Err(CertifyError::NonPositiveDelta);
    }
    let n = g.n();
    let mut incidence: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    for (j, clique) in fam.cliques.iter().enumerate() {
        for &v in clique.members() {
            incidence[v].push((j, int(1)));
        }
    }
    let mut lp = LinearProgram::new(fam.len(), Sense::Maximise, vec![int(1); fam.len()]);
    for row in incidence.into_iter().filter(|row| !row.is_empty()) {
        lp.add_constraint(row, Relation::Le, delta.clone());
    }
    let solution = lp.solve()?;
    let packing_value = solution.value.clone();
    if packing_value < int(1) {
        return Err(inconsistency(
            "packing_optimum_at_least_one",
            format!("packing LP optimum {packing_value} < 1 at delta = {delta}"),
        ));
    }
    let mu = FamilyMeasure::new(solution.primal.iter().map(|x| x / &packing_value).collect())?;
    let vertex_mass = mu.vertex_masses(fam, n);
    if let Some(v) = (0..n).find(|&v| vertex_mass[v] > *delta) {
        return Err(inconsistency(
            "vertex_mass_at_most_delta",
            format!("mu({v}) = {} > delta = {delta}", vertex_mass[v]),
        ));
    }
    Ok(MuSolution {
        mu,
        packing_value,
        vertex_mass,
        audit: LpAudit::of(&lp, &solution),
    })
}

/// Whether every clique of `fam1` meets every clique of `fam2` in at most
/// one vertex. Two shared vertices would put one pair inside cliques of both
/// colours, so this scans the pairs covered by each family.
pub fn check_pairwise_intersections(
    n: usize,
    fam1: &CliqueFamily,
    fam2: &CliqueFamily,
) -> Result<bool, CertifyError> {
    if fam1.colour == fam2.colour {
        return Err(CertifyError::SameColour(fam1.colour));
    }
    let mut covered = vec![false; n * n.saturating_sub(1) / 2];
    for clique in &fam1.cliques {
        let m = clique.members();
        for (i, &u) in m.iter().enumerate() {
            for &v in &m[i + 1..] {
                covered[pair_index(n, u, v)] = true;
            }
        }
    }
    Ok(fam2.cliques.iter().all(|clique| {
        let m = clique.members();
        m.iter()
            .enumerate()
            .all(|(i, &u)| m[i + 1..].iter().all(|&v| !covered[pair_index(n, u, v)]))
    }))
}

/// For `δ > 1/2`, whether the support of the maximiser `λ*` induces a
/// colour-`c` clique (true vacuously for `δ ≤ 1/2`).
pub fn support_clique_check(
    g: &EdgeColouredGraph,
    c: ColourId,
    lambda_star: &VertexMeasure,
    delta: &Rational,
) -> bool {
    if *delta <= ratio(1, 2) {
        return true;
    }
    g.is_monochromatic_clique(&lambda_star.support(), c)
}

/// The least value of `h(x) = (k1−1)/x + (k2−1)/(1−x)` over the feasible
/// splits: either the global minimum `(√(k1−1) + √(k2−1))²` or, when the
/// stationary point falls outside the interval, an endpoint value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitMinimum {
    Stationary {
        integer: String,
        radicand: String,
        ceiling: String,
    },
    Endpoint {
        #[serde(with = "rational")]
        value: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoColourBound {
    /// Strongest bound `max h(x)` over `x ∈ [δ1, 1−δ2]`.
    #[serde(with = "rational")]
    pub value: Rational,
    /// Split `δ1'` attaining `value`.
    #[serde(with = "rational")]
    pub split: Rational,
    pub ceiling: String,
    pub minimum: SplitMinimum,
}

fn split_objective(a: &Rational, b: &Rational, x: &Rational) -> Rational {
    a / x + b / (int(1) - x)
}

/// Lower bound on `n` from `n ≥ k1/δ1' + k2/δ2' − 1/(δ1'δ2')` with
/// `δ1' + δ2' = 1`, `δ1' ≥ δ1`, `δ2' ≥ δ2`; that expression equals
/// `h(δ1') = (k1−1)/δ1' + (k2−1)/(1−δ1')`.
///
/// `h` is convex on (0, 1), so its maximum over the feasible interval sits
/// at an endpoint; that maximum is the bound. The minimum (the stationary
/// point `√(k1−1)/(√(k1−1)+√(k2−1))` when feasible) is reported alongside;
/// the stationary test compares squares so it stays exact.
pub fn two_colour_bound(
    k1: usize,
    k2: usize,
    delta1: &Rational,
    delta2: &Rational,
) -> Result<TwoColourBound, CertifyError> {
    if k1 == 0 || k2 == 0 {
        return Err(BoundError::TooSmall {
            what: "k",
            min: 1,
            got: 0,
        }
        .into());
    }
    if !delta1.is_positive() || !delta2.is_positive() {
        return Err(CertifyError::NonPositiveDelta);
    }
    let total = delta1 + delta2;
    if total > int(1) {
        return Err(CertifyError::DeltaSumExceedsOne(total.to_string()));
    }
    let a = int(k1 as i64 - 1);
    let b = int(k2 as i64 - 1);
    let lo = delta1.clone();
    let hi = int(1) - delta2;
    let (h_lo, h_hi) = (split_objective(&a, &b, &lo), split_objective(&a, &b, &hi));
    let (value, split) = if h_hi > h_lo {
        (h_hi.clone(), hi.clone())
    } else {
        (h_lo.clone(), lo.clone())
    };
    // x* ≥ lo  ⇔  √a(1−lo) ≥ lo√b  ⇔  a(1−lo)² ≥ lo²b, both sides non-negative.
    let one = int(1);
    let above_lo = &a * (&one - &lo) * (&one - &lo) >= &lo * &lo * &b;
    let below_hi = &a * (&one - &hi) * (&one - &hi) <= &hi * &hi * &b;
    let minimum = match (above_lo, below_hi) {
        (true, true) => {
            let surd = Surd::sqrt_sum_squared(k1 as u128 - 1, k2 as u128 - 1);
            SplitMinimum::Stationary {
                integer: surd.integer.to_string(),
                radicand: surd.radicand.to_string(),
                ceiling: surd.ceil().to_string(),
            }
        }
        (false, _) => SplitMinimum::Endpoint { value: h_lo },
        (true, false) => SplitMinimum::Endpoint { value: h_hi },
    };
    Ok(TwoColourBound {
        ceiling: value.ceil().to_integer().to_string(),
        value,
        split,
        minimum,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourCertificate {
    pub colour: ColourId,
    pub k: usize,
    pub family: CliqueFamily,
    #[serde(with = "rational")]
    pub delta: Rational,
    /// `1/δ`.
    #[serde(with = "rational")]
    pub alpha: Rational,
    pub lambda_star: VertexMeasure,
    pub mu: FamilyMeasure,
    /// `μ(v)` for every vertex.
    #[serde(with = "rational_vec")]
    pub vertex_mass: Vec<Rational>,
    #[serde(with = "rational")]
    pub packing_value: Rational,
    pub support_is_clique: bool,
    pub delta_lp: LpAudit,
    pub packing_lp: LpAudit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub colours: (ColourId, ColourId),
    #[serde(with = "rational")]
    pub delta_sum: Rational,
    /// `Σ_v μᵢ(v) μⱼ(v)`.
    #[serde(with = "rational")]
    pub mu_overlap: Rational,
    pub intersections_at_most_one: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivedBound {
    TwoColour(TwoColourBound),
    /// `n ≥ f(ᾱ) = max_m (k·m·ᾱ − m(m−1)ᾱ²/2)` with `ᾱ` the mean of `1/δᵢ`.
    Multicolour {
        #[serde(with = "rational")]
        alpha_bar: Rational,
        #[serde(with = "rational")]
        value: Rational,
        maximising_m: usize,
        ceiling: String,
    },
}

impl DerivedBound {
    pub fn value(&self) -> &Rational {
        match self {
            DerivedBound::TwoColour(b) => &b.value,
            DerivedBound::Multicolour { value, .. } => value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub r: usize,
    pub policy: FamilyPolicy,
    pub targets: Vec<(ColourId, usize)>,
    pub colours: Vec<ColourCertificate>,
    pub pairs: Vec<PairCheck>,
    /// Absent for single-colour graphs.
    pub bound: Option<DerivedBound>,
}

impl Certificate {
    pub fn all_lp_duality_exact(&self) -> bool {
        self.colours
            .iter()
            .all(|c| c.delta_lp.strong_duality_holds() && c.packing_lp.strong_duality_holds())
    }
}

/// Certifies one colour: family, δ with maximiser, μ, and per-colour checks.
pub fn certify_colour(
    g: &EdgeColouredGraph,
    colour: ColourId,
    k: usize,
    policy: FamilyPolicy,
) -> Result<ColourCertificate, CertifyError> {
    let family = choose_family_limited(g, colour, k, policy, MAX_LP_FAMILY)?;
    if !family.covers_all() {
        let vertex = family.designated.iter().position(Option::is_none).unwrap();
        return Err(CertifyError::NotEnabling { vertex, colour });
    }
    let delta = compute_delta(g, &family)?;
    let mu = construct_mu(g, &family, &delta.delta)?;
    let support_is_clique = support_clique_check(g, colour, &delta.lambda_star, &delta.delta);
    let cert = ColourCertificate {
        colour,
        k,
        alpha: delta.delta.recip(),
        delta: delta.delta,
        lambda_star: delta.lambda_star,
        mu: mu.mu,
        vertex_mass: mu.vertex_mass,
        packing_value: mu.packing_value,
        support_is_clique,
        delta_lp: delta.audit,
        packing_lp: mu.audit,
        family,
    };
    colour_invariants(g.n(), &cert)?;
    Ok(cert)
}

/// Proved per-colour facts, checked on exact values.
fn colour_invariants(n: usize, cert: &ColourCertificate) -> Result<(), CertifyError> {
    let c = cert.colour;
    let floor = ratio(cert.k as i64, n as i64);
    if cert.delta < floor {
        return Err(inconsistency(
            "delta_at_least_k_over_n",
            format!("colour {c}: delta = {} < k/n = {floor}", cert.delta),
        ));
    }
    let total = sum(cert.vertex_mass.iter().cloned());
    if total != int(cert.k as i64) {
        return Err(inconsistency(
            "vertex_mass_sums_to_k",
            format!("colour {c}: sum of mu(v) = {total}, k = {}", cert.k),
        ));
    }
    if let Some(v) = (0..n).find(|&v| cert.vertex_mass[v] > cert.delta) {
        return Err(inconsistency(
            "vertex_mass_at_most_delta",
            format!(
                "colour {c}: mu({v}) = {} > delta = {}",
                cert.vertex_mass[v], cert.delta
            ),
        ));
    }
    if cert.packing_value < int(1) {
        return Err(inconsistency(
            "packing_optimum_at_least_one",
            format!("colour {c}: packing optimum {}", cert.packing_value),
        ));
    }
    if !cert.support_is_clique {
        return Err(inconsistency(
            "support_is_clique",
            format!(
                "colour {c}: delta = {} > 1/2 but supp(lambda*) = {} is not a clique",
                cert.delta,
                cert.lambda_star.support()
            ),
        ));
    }
    for (name, audit) in [("delta", &cert.delta_lp), ("packing", &cert.packing_lp)] {
        if !audit.strong_duality_holds() {
            return Err(inconsistency(
                "strong_duality",
                format!(
                    "colour {c} {name} LP: primal {} != dual {}",
                    audit.primal_value, audit.dual_value
                ),
            ));
        }
    }
    Ok(())
}

fn pair_check(
    n: usize,
    a: &ColourCertificate,
    b: &ColourCertificate,
) -> Result<PairCheck, CertifyError> {
    let overlap = sum(a.vertex_mass.iter().zip(&b.vertex_mass).map(|(x, y)| x * y));
    Ok(PairCheck {
        colours: (a.colour, b.colour),
        delta_sum: &a.delta + &b.delta,
        mu_overlap: overlap,
        intersections_at_most_one: check_pairwise_intersections(n, &a.family, &b.family)?,
    })
}

fn pair_invariants(p: &PairCheck) -> Result<(), CertifyError> {
    let (i, j) = p.colours;
    if p.delta_sum > int(1) {
        return Err(inconsistency(
            "delta_sum_at_most_one",
            format!("colours {i},{j}: delta sum {}", p.delta_sum),
        ));
    }
    if p.mu_overlap > int(1) {
        return Err(inconsistency(
            "mu_overlap_at_most_one",
            format!("colours {i},{j}: sum of mu_i(v) mu_j(v) = {}", p.mu_overlap),
        ));
    }
    if !p.intersections_at_most_one {
        return Err(inconsistency(
            "cliques_meet_in_at_most_one_vertex",
            format!("colours {i},{j}"),
        ));
    }
    Ok(())
}

fn derive_bound(
    n: usize,
    colours: &[ColourCertificate],
) -> Result<Option<DerivedBound>, CertifyError> {
    let bound = match colours {
        [] | [_] => return Ok(None),
        [a, b] => DerivedBound::TwoColour(two_colour_bound(a.k, b.k, &a.delta, &b.delta)?),
        _ => {
            let k = colours[0].k;
            if colours.iter().any(|c| c.k != k) {
                return Err(CertifyError::MixedCliqueSizes(
                    colours.iter().map(|c| c.k).collect(),
                ));
            }
            let r = colours.len();
            let alpha_bar = sum(colours.iter().map(|c| c.alpha.clone())) / int(r as i64);
            let (value, maximising_m) = f_max_arg(r, k, &alpha_bar);
            DerivedBound::Multicolour {
                ceiling: value.ceil().to_integer().to_string(),
                alpha_bar,
                value,
                maximising_m,
            }
        }
    };
    if colours.len() >= 2 {
        let alpha_bar = sum(colours.iter().map(|c| c.alpha.clone())) / int(colours.len() as i64);
        if alpha_bar < int(2) {
            return Err(inconsistency(
                "mean_alpha_at_least_two",
                format!("mean of 1/delta is {alpha_bar}"),
            ));
        }
    }
    if *bound.value() > int(n as i64) {
        return Err(inconsistency(
            "bound_at_most_n",
            format!("derived bound {} exceeds n = {n}", bound.value()),
        ));
    }
    Ok(Some(bound))
}

/// Full pipeline on an enabling graph. `targets` must name every colour of
/// the graph exactly once.
pub fn certify(
    g: &EdgeColouredGraph,
    targets: &[(ColourId, usize)],
    policy: FamilyPolicy,
) -> Result<Certificate, CertifyError> {
    check_targets(g, targets)?;
    if targets.len() != g.r() {
        return Err(CertifyError::IncompleteTargets { r: g.r() });
    }
    let mut targets = targets.to_vec();
    targets.sort_unstable();
    let report = verify_enabling(g, &targets)?;
    if let Some((vertex, colour)) = report.first_failure {
        return Err(CertifyError::NotEnabling { vertex, colour });
    }
    let colours = targets
        .iter()
        .map(|&(c, k)| certify_colour(g, c, k, policy))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pairs = Vec::new();
    for (i, a) in colours.iter().enumerate() {
        for b in &colours[i + 1..] {
            let p = pair_check(g.n(), a, b)?;
            pair_invariants(&p)?;
            pairs.push(p);
        }
    }
    let bound = derive_bound(g.n(), &colours)?;
    Ok(Certificate {
        n: g.n(),
        r: g.r(),
        policy,
        targets,
        colours,
        pairs,
        bound,
    })
}

/// Re-verifies a stored certificate against `g` using only exact arithmetic
/// on the stored values: no LP is solved.
pub fn check_certificate(g: &EdgeColouredGraph, cert: &Certificate) -> Result<(), CertifyError> {
    let mismatch = |msg: String| Err(CertifyError::Mismatch(msg));
    if cert.n != g.n() || cert.r != g.r() {
        return mismatch(format!(
            "certificate is for n = {}, r = {}; graph has n = {}, r = {}",
            cert.n,
            cert.r,
            g.n(),
            g.r()
        ));
    }
    if cert.colours.len() != cert.targets.len()
        || cert
            .colours
            .iter()
            .zip(&cert.targets)
            .any(|(c, &(colour, k))| c.colour != colour || c.k != k)
    {
        return mismatch("per-colour entries do not match the targets".into());
    }
    check_targets(g, &cert.targets)?;
    let n = g.n();
    for c in &cert.colours {
        check_family(g, &c.family)?;
        if c.family.k != c.k || c.family.colour != c.colour || !c.family.covers_all() {
            return mismatch(format!(
                "family of colour {} does not cover every vertex",
                c.colour
            ));
        }
        if c.lambda_star.weights.len() != n || c.mu.weights.len() != c.family.len() {
            return mismatch(format!("measure lengths wrong for colour {}", c.colour));
        }
        VertexMeasure::new(c.lambda_star.weights.clone())?;
        FamilyMeasure::new(c.mu.weights.clone())?;
        let attained = c.lambda_star.min_clique_mass(&c.family).expect("non-empty");
        if attained != c.delta {
            return mismatch(format!(
                "colour {}: lambda* attains {attained}, not delta = {}",
                c.colour, c.delta
            ));
        }
        if c.alpha != c.delta.recip() {
            return mismatch(format!("colour {}: alpha is not 1/delta", c.colour));
        }
        if c.mu.vertex_masses(&c.family, n) != c.vertex_mass {
            return mismatch(format!(
                "colour {}: stored vertex masses are wrong",
                c.colour
            ));
        }
        if c.support_is_clique != support_clique_check(g, c.colour, &c.lambda_star, &c.delta) {
            return mismatch(format!("colour {}: support flag is wrong", c.colour));
        }
        // A probability μ with every μ(v) ≤ δ bounds min_C λ(C) by δ for
        // every λ, so δ is optimal; the packing optimum is at least 1.
        colour_invariants(n, c)?;
    }
    let mut expected_pairs = Vec::new();
    for (i, a) in cert.colours.iter().enumerate() {
        for b in &cert.colours[i + 1..] {
            expected_pairs.push(pair_check(n, a, b)?);
        }
    }
    if expected_pairs != cert.pairs {
        return mismatch("pairwise checks do not match the recomputed values".into());
    }
    for p in &cert.pairs {
        pair_invariants(p)?;
    }
    if derive_bound(n, &cert.colours)? != cert.bound {
        return mismatch("derived bound does not match the recomputed value".into());
    }
    Ok(())
}
