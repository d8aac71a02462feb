//! Closed-form bounds on the smallest enabling graphs, and the scalar
//! inequalities used by the multicolour bound.
//!
//! Irrational quantities are decided through integer square roots, never
//! floating point.

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{is_prime, TwoColourExtremalParams};
use crate::scalar::{ceil_sqrt, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("entry {index} = {value} lies outside [0, 1]")]
    OutOfUnitInterval { index: usize, value: String },
    #[error("subset size {m} exceeds the colour count {r}")]
    SubsetTooLarge { m: usize, r: usize },
}

fn at_least(what: &'static str, min: usize, got: usize) -> Result<(), BoundError> {
    if got < min {
        Err(BoundError::TooSmall { what, min, got })
    } else {
        Ok(())
    }
}

/// `p + 2√q`, kept symbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Surd {
    pub integer: u128,
    pub radicand: u128,
}

impl Surd {
    /// `(√x + √y)² = x + y + 2√(xy)`.
    pub fn sqrt_sum_squared(x: u128, y: u128) -> Self {
        Surd {
            integer: x + y,
            radicand: x * y,
        }
    }

    /// `⌈p + 2√q⌉ = p + ⌈√(4q)⌉`.
    pub fn ceil(&self) -> u128 {
        self.integer + ceil_sqrt(4 * self.radicand)
    }

    pub fn is_integer(&self) -> bool {
        crate::scalar::exact_sqrt(4 * self.radicand).is_some()
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match crate::scalar::exact_sqrt(4 * self.radicand) {
            Some(root) => write!(f, "{}", self.integer + root),
            None => write!(f, "{}+2*sqrt({})", self.integer, self.radicand),
        }
    }
}

/// `n(k1, k2) ≥ ⌈(√(k1−1) + √(k2−1))²⌉`, with `n(1, k) = n(k, 1) = k`.
pub fn two_colour_lower(k1: usize, k2: usize) -> Result<u64, BoundError> {
    at_least("k1", 1, k1)?;
    at_least("k2", 1, k2)?;
    if k1 == 1 {
        return Ok(k2 as u64);
    }
    if k2 == 1 {
        return Ok(k1 as u64);
    }
    Ok(Surd::sqrt_sum_squared(k1 as u128 - 1, k2 as u128 - 1).ceil() as u64)
}

/// Largest `k` admitting a `(k, k)`-enabling graph on `n` vertices: `⌊n/4⌋+1`.
pub fn balanced_enabling_level(n: usize) -> Result<usize, BoundError> {
    at_least("n", 1, n)?;
    Ok(n / 4 + 1)
}

/// `Σ_{i<j} xᵢxⱼ − Σ xᵢ + 1` for entries in `[0, 1]`.
pub fn improved_inequality<T: Scalar>(x: &[T]) -> Result<T, BoundError> {
    for (index, value) in x.iter().enumerate() {
        if *value < T::zero() || *value > T::one() {
            return Err(BoundError::OutOfUnitInterval {
                index,
                value: value.to_string(),
            });
        }
    }
    // Σ_{i<j} xᵢxⱼ accumulated against the running prefix sum.
    let mut prefix = T::zero();
    let mut pairs = T::zero();
    for value in x {
        pairs = pairs + prefix.clone() * value.clone();
        prefix = prefix + value.clone();
    }
    Ok(pairs - prefix + T::one())
}

/// `f_m(x) = k·m·x − (m(m−1)/2)·x²`.
pub fn f_eval<T: Scalar>(m: usize, k: usize, x: &T) -> T {
    let m_t = T::from_usize_exact(m);
    let k_t = T::from_usize_exact(k);
    let pairs = T::from_usize_exact(m * m.saturating_sub(1) / 2);
    k_t * m_t * x.clone() - pairs * x.clone() * x.clone()
}

/// `f_m` with the subset size checked against `r`.
pub fn f_eval_checked<T: Scalar>(r: usize, m: usize, k: usize, x: &T) -> Result<T, BoundError> {
    if m > r {
        return Err(BoundError::SubsetTooLarge { m, r });
    }
    Ok(f_eval(m, k, x))
}

/// `max_{0≤m≤r} f_m(x)` and the smallest maximising `m`.
pub fn f_max_arg<T: Scalar>(r: usize, k: usize, x: &T) -> (T, usize) {
    let mut best = (T::zero(), 0);
    for m in 1..=r {
        let value = f_eval(m, k, x);
        if value > best.0 {
            best = (value, m);
        }
    }
    best
}

pub fn f_max<T: Scalar>(r: usize, k: usize, x: &T) -> T {
    f_max_arg(r, k, x).0
}

/// One formula evaluated while deriving a bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub formula: String,
    /// Integer value, or the ceiling of an irrational one.
    pub value: i128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_form: Option<String>,
}

impl FormulaValue {
    fn integer(formula: impl Into<String>, value: i128) -> Self {
        Self {
            formula: formula.into(),
            value,
            exact_form: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub quantity: String,
    pub lower: u64,
    pub upper: Option<u64>,
    pub exact: Option<u64>,
    /// Lower and upper bound differ and no exact value is known.
    pub open_gap: bool,
    pub provenance: Vec<FormulaValue>,
}

impl BoundReport {
    fn new(
        quantity: String,
        lower: u64,
        upper: Option<u64>,
        provenance: Vec<FormulaValue>,
    ) -> Self {
        debug_assert!(upper.is_none_or(|u| lower <= u));
        let exact = upper.filter(|&u| u == lower);
        Self {
            quantity,
            lower,
            upper,
            exact,
            open_gap: exact.is_none(),
            provenance,
        }
    }
}

/// Lower bound on `n_r(k)`: the better of `r(k−1)+1` and `f(2)`, where
/// `f(2) = max_m 2km − 2m(m−1) ≥ 2rk − 2r(r−1)`.
pub fn multicolour_lower(r: usize, k: usize) -> Result<(u64, Vec<FormulaValue>), BoundError> {
    at_least("r", 2, r)?;
    at_least("k", 2, k)?;
    let trivial = (r * (k - 1) + 1) as i128;
    let (f_two, m) = f_max_arg(r, k, &crate::scalar::int(2));
    let f_two = f_two
        .to_integer()
        .to_i128()
        .expect("f(2) is an integer of moderate size");
    let closed = 2 * (r * k) as i128 - 2 * (r * (r - 1)) as i128;
    let provenance = vec![
        FormulaValue::integer("trivial r(k-1)+1", trivial),
        FormulaValue {
            formula: "f_max(r,k,2)".into(),
            value: f_two,
            exact_form: Some(format!("attained at m = {m}")),
        },
        FormulaValue::integer("2rk-2r(r-1)", closed),
    ];
    Ok((trivial.max(f_two) as u64, provenance))
}

/// Upper bound on `n_r(k)`: the block construction `2r(k−1)`, improved to
/// `p²` by the prime slope construction when `k = p` is prime and `r = p+1`.
pub fn multicolour_upper(r: usize, k: usize) -> Result<(u64, Vec<FormulaValue>), BoundError> {
    at_least("r", 2, r)?;
    at_least("k", 2, k)?;
    let blocks = (2 * r * (k - 1)) as i128;
    let mut provenance = vec![FormulaValue::integer("multicolour_blocks 2r(k-1)", blocks)];
    let mut best = blocks;
    if is_prime(k) && r == k + 1 {
        let slope = (k * k) as i128;
        provenance.push(FormulaValue::integer("prime_slope p^2", slope));
        best = best.min(slope);
    }
    Ok((best as u64, provenance))
}

pub fn multicolour_report(r: usize, k: usize) -> Result<BoundReport, BoundError> {
    let (lower, mut provenance) = multicolour_lower(r, k)?;
    let (upper, upper_provenance) = multicolour_upper(r, k)?;
    provenance.extend(upper_provenance);
    Ok(BoundReport::new(
        format!("n_{r}({k})"),
        lower,
        Some(upper),
        provenance,
    ))
}

/// How far past `(k1, k2)` to look for a dominating extremal pair.
const DOMINATING_WINDOW: usize = 64;

/// Bounds on `n(k1, k2)`. The upper bound comes from the smallest extremal
/// graph for a pair `(k1', k2') ≥ (k1, k2)` (any such graph is also
/// `(k1, k2)`-enabling) and from the P₄ blow-up at `max(k1, k2)`.
pub fn two_colour_report(k1: usize, k2: usize) -> Result<BoundReport, BoundError> {
    let lower = two_colour_lower(k1, k2)?;
    let quantity = format!("n({k1},{k2})");
    if k1 == 1 || k2 == 1 {
        let provenance = vec![FormulaValue::integer("n(1,k) = k", lower as i128)];
        return Ok(BoundReport::new(quantity, lower, Some(lower), provenance));
    }
    let surd = Surd::sqrt_sum_squared(k1 as u128 - 1, k2 as u128 - 1);
    let mut provenance = vec![FormulaValue {
        formula: "(sqrt(k1-1)+sqrt(k2-1))^2".into(),
        value: surd.ceil() as i128,
        exact_form: Some(surd.to_string()),
    }];
    let kmax = k1.max(k2);
    let blowup = (4 * kmax - 4) as u64;
    provenance.push(FormulaValue::integer(
        "p4_blowup 4max(k1,k2)-4",
        blowup as i128,
    ));
    let mut upper = blowup;
    let mut dominating: Option<TwoColourExtremalParams> = None;
    for a in k1..=k1 + DOMINATING_WINDOW {
        for b in k2..=k2 + DOMINATING_WINDOW {
            if let Ok(params) = TwoColourExtremalParams::new(a, b) {
                if dominating.is_none_or(|d| params.n < d.n) {
                    dominating = Some(params);
                }
            }
        }
    }
    if let Some(d) = dominating {
        provenance.push(FormulaValue::integer(
            format!("two_colour_extremal({},{})", d.k1, d.k2),
            d.n as i128,
        ));
        upper = upper.min(d.n as u64);
    }
    Ok(BoundReport::new(quantity, lower, Some(upper), provenance))
}
