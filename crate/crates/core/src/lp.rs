//! Dense two-phase primal simplex with Bland's pivoting rule.
//!
//! Generic over [`Scalar`]; at [`crate::Rational`] every step is exact, and
//! each solve ends with an audit that checks primal feasibility, dual
//! feasibility and equality of the primal and dual objectives.
//!
//! All variables are non-negative. Duals follow the usual sign conventions:
//! for a maximisation, `≤` rows have `y ≥ 0`, `≥` rows `y ≤ 0`, equalities
//! free, and `Aᵀy ≥ c`; for a minimisation the inequalities flip.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximise,
    Minimise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<T> {
    /// Sparse row as (variable, coefficient).
    pub coeffs: Vec<(usize, T)>,
    pub relation: Relation,
    pub rhs: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T> {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("solution audit failed: {0}")]
    Audit(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    /// Optimal basic solution, one entry per variable.
    pub primal: Vec<T>,
    /// One multiplier per constraint, in the conventions above.
    pub dual: Vec<T>,
    /// `Σ rhs_i · dual_i`; equal to `value` (checked by the audit).
    pub dual_value: T,
    pub pivots: usize,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(num_vars: usize, sense: Sense, objective: Vec<T>) -> Self {
        Self {
            num_vars,
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, T)>, relation: Relation, rhs: T) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.num_vars {
            return Err(LpError::Malformed(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if let Some(&(var, _)) = row.coeffs.iter().find(|(var, _)| *var >= self.num_vars) {
                return Err(LpError::Malformed(format!(
                    "constraint {i} references variable {var}"
                )));
            }
        }
        Ok(())
    }

    /// Solves to optimality and audits the result.
    pub fn solve(&self) -> Result<LpSolution<T>, LpError> {
        self.validate()?;
        let solution = Tableau::new(self).run()?;
        self.audit(&solution)?;
        Ok(solution)
    }

    fn row_activity(&self, row: &Constraint<T>, x: &[T]) -> T {
        row.coeffs
            .iter()
            .fold(T::zero(), |acc, (var, a)| acc + a.clone() * x[*var].clone())
    }

    fn audit(&self, s: &LpSolution<T>) -> Result<(), LpError> {
        let fail = |msg: String| Err(LpError::Audit(msg));
        if s.primal.iter().any(|x| x.is_negative_tol()) {
            return fail("negative primal value".into());
        }
        for (i, row) in self.constraints.iter().enumerate() {
            let slack = self.row_activity(row, &s.primal) - row.rhs.clone();
            let ok = match row.relation {
                Relation::Le => !slack.is_positive_tol(),
                Relation::Ge => !slack.is_negative_tol(),
                Relation::Eq => slack.is_zero_tol(),
            };
            if !ok {
                return fail(format!("primal constraint {i} violated by {slack}"));
            }
            // Dual sign: in the maximisation orientation, ≤ rows carry y ≥ 0.
            let y = match self.sense {
                Sense::Maximise => s.dual[i].clone(),
                Sense::Minimise => -s.dual[i].clone(),
            };
            let sign_ok = match row.relation {
                Relation::Le => !y.is_negative_tol(),
                Relation::Ge => !y.is_positive_tol(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return fail(format!("dual {i} = {} has the wrong sign", s.dual[i]));
            }
        }
        let mut reduced: Vec<T> = self.objective.iter().map(|c| -c.clone()).collect();
        for (row, y) in self.constraints.iter().zip(&s.dual) {
            for (var, a) in &row.coeffs {
                reduced[*var] = reduced[*var].clone() + a.clone() * y.clone();
            }
        }
        for (j, d) in reduced.iter().enumerate() {
            let ok = match self.sense {
                Sense::Maximise => !d.is_negative_tol(),
                Sense::Minimise => !d.is_positive_tol(),
            };
            if !ok {
                return fail(format!("dual constraint for variable {j} violated by {d}"));
            }
        }
        let primal_value = self
            .objective
            .iter()
            .zip(&s.primal)
            .fold(T::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
        if !(primal_value.clone() - s.value.clone()).is_zero_tol() {
            return fail(format!(
                "reported value {} != c·x = {primal_value}",
                s.value
            ));
        }
        if !(s.value.clone() - s.dual_value.clone()).is_zero_tol() {
            return fail(format!(
                "duality gap: primal {} vs dual {}",
                s.value, s.dual_value
            ));
        }
        Ok(())
    }
}

struct Tableau<'a, T> {
    lp: &'a LinearProgram<T>,
    /// `rows[i]` holds the row coefficients followed by the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Column whose original form is `+e_i` for row `i` (slack or artificial).
    identity_col: Vec<usize>,
    /// Rows multiplied by −1 to make the right-hand side non-negative.
    flipped: Vec<bool>,
    first_artificial: usize,
    num_cols: usize,
    pivots: usize,
}

impl<'a, T: Scalar> Tableau<'a, T> {
    fn new(lp: &'a LinearProgram<T>) -> Self {
        let m = lp.constraints.len();
        let n = lp.num_vars;
        let mut flipped = Vec::with_capacity(m);
        let mut relations = Vec::with_capacity(m);
        for row in &lp.constraints {
            let flip = row.rhs.is_negative();
            flipped.push(flip);
            relations.push(match (row.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (rel, _) => rel,
            });
        }
        let slacks = relations.iter().filter(|r| **r != Relation::Eq).count();
        let artificials = relations.iter().filter(|r| **r != Relation::Le).count();
        let first_artificial = n + slacks;
        let num_cols = first_artificial + artificials;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut identity_col = Vec::with_capacity(m);
        let (mut next_slack, mut next_artificial) = (n, first_artificial);
        for (i, row) in lp.constraints.iter().enumerate() {
            let sign = if flipped[i] { -T::one() } else { T::one() };
            let mut dense = vec![T::zero(); num_cols + 1];
            for (var, a) in &row.coeffs {
                dense[*var] = dense[*var].clone() + a.clone() * sign.clone();
            }
            dense[num_cols] = row.rhs.clone() * sign;
            match relations[i] {
                Relation::Le => {
                    dense[next_slack] = T::one();
                    basis.push(next_slack);
                    identity_col.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    dense[next_slack] = -T::one();
                    next_slack += 1;
                    dense[next_artificial] = T::one();
                    basis.push(next_artificial);
                    identity_col.push(next_artificial);
                    next_artificial += 1;
                }
                Relation::Eq => {
                    dense[next_artificial] = T::one();
                    basis.push(next_artificial);
                    identity_col.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(dense);
        }
        Self {
            lp,
            rows,
            basis,
            identity_col,
            flipped,
            first_artificial,
            num_cols,
            pivots: 0,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = T::one() / self.rows[row][col].clone();
        let pivot_row: Vec<T> = self.rows[row]
            .iter()
            .map(|a| a.clone() * inv.clone())
            .collect();
        let support: Vec<usize> = (0..=self.num_cols)
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        for (i, other) in self.rows.iter_mut().enumerate() {
            if i == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for &j in &support {
                other[j] = other[j].clone() - factor.clone() * pivot_row[j].clone();
            }
            if T::EXACT {
                debug_assert!(other[col].is_zero());
            } else {
                other[col] = T::zero();
            }
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Reduced costs `c_B B⁻¹ A_j − c_j` for a maximisation with costs `cost`.
    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut reduced: Vec<T> = cost.iter().map(|c| -c.clone()).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (j, a) in row[..self.num_cols].iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] = reduced[j].clone() + cost[b].clone() * a.clone();
                }
            }
        }
        reduced
    }

    /// Maximises `cost · x` from the current basis. Columns at or beyond
    /// `enter_limit` never enter. Bland's rule: the lowest-index improving
    /// column enters; ratio ties leave by lowest basic variable index.
    fn optimise(&mut self, cost: &[T], enter_limit: usize) -> Result<(), LpError> {
        loop {
            let reduced = self.reduced_costs(cost);
            let Some(col) = (0..enter_limit).find(|&j| reduced[j].is_negative_tol()) else {
                return Ok(());
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive_tol() {
                    continue;
                }
                let ratio = row[self.num_cols].clone() / row[col].clone();
                let better = match &best {
                    None => true,
                    Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Err(LpError::Unbounded),
            }
        }
    }

    fn run(mut self) -> Result<LpSolution<T>, LpError> {
        let n = self.lp.num_vars;
        if self.first_artificial < self.num_cols {
            let mut phase_one = vec![T::zero(); self.num_cols];
            for c in &mut phase_one[self.first_artificial..] {
                *c = -T::one();
            }
            self.optimise(&phase_one, self.num_cols)?;
            let infeasibility = self
                .rows
                .iter()
                .zip(&self.basis)
                .filter(|(_, &b)| b >= self.first_artificial)
                .fold(T::zero(), |acc, (row, _)| acc + row[self.num_cols].clone());
            if infeasibility.is_positive_tol() {
                return Err(LpError::Infeasible);
            }
            // Drive zero-valued artificials out where a structural column allows.
            for i in 0..self.rows.len() {
                if self.basis[i] < self.first_artificial {
                    continue;
                }
                if let Some(col) =
                    (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero_tol())
                {
                    self.pivot(i, col);
                }
            }
        }

        let mut cost = vec![T::zero(); self.num_cols];
        for (j, c) in self.lp.objective.iter().enumerate() {
            cost[j] = match self.lp.sense {
                Sense::Maximise => c.clone(),
                Sense::Minimise => -c.clone(),
            };
        }
        self.optimise(&cost, self.first_artificial)?;

        let mut primal = vec![T::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                primal[b] = row[self.num_cols].clone();
            }
        }
        let reduced = self.reduced_costs(&cost);
        let dual: Vec<T> = (0..self.rows.len())
            .map(|i| {
                let y = reduced[self.identity_col[i]].clone();
                let y = if self.flipped[i] { -y } else { y };
                match self.lp.sense {
                    Sense::Maximise => y,
                    Sense::Minimise => -y,
                }
            })
            .collect();
        let value = self
            .lp
            .objective
            .iter()
            .zip(&primal)
            .fold(T::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
        let dual_value = self
            .lp
            .constraints
            .iter()
            .zip(&dual)
            .fold(T::zero(), |acc, (row, y)| acc + row.rhs.clone() * y.clone());
        Ok(LpSolution {
            value,
            primal,
            dual,
            dual_value,
            pivots: self.pivots,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::Rational;
    use num_rational::Ratio;
    use proptest::prelude::*;

    /// maximise t s.t. t ≤ x, t ≤ 1 − x, x ≤ 1; variables (x, t).
    fn max_min_lp<T: Scalar>() -> LinearProgram<T> {
        let one = T::one();
        let mut lp = LinearProgram::new(2, Sense::Maximise, vec![T::zero(), one.clone()]);
        lp.add_constraint(
            vec![(1, one.clone()), (0, -one.clone())],
            Relation::Le,
            T::zero(),
        );
        lp.add_constraint(
            vec![(1, one.clone()), (0, one.clone())],
            Relation::Le,
            one.clone(),
        );
        lp.add_constraint(vec![(0, one.clone())], Relation::Le, one);
        lp
    }

    #[test]
    fn symmetric_max_min_is_half() {
        let s = max_min_lp::<Rational>().solve().unwrap();
        assert_eq!(s.value, ratio(1, 2));
        assert_eq!(s.primal, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(s.dual_value, s.value);

        let f = max_min_lp::<f64>().solve().unwrap();
        assert!((f.value - 0.5).abs() < 1e-12);

        let small = max_min_lp::<Ratio<i64>>().solve().unwrap();
        assert_eq!(small.value, Ratio::new(1, 2));
    }

    #[test]
    fn single_clique_packing() {
        // maximise μ s.t. μ ≤ 1 for each of three vertices.
        let mut lp = LinearProgram::new(1, Sense::Maximise, vec![int(1)]);
        for _ in 0..3 {
            lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1));
        }
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.primal, vec![int(1)]);
    }

    #[test]
    fn minimisation_with_equality_and_ge() {
        // minimise 2x + 3y s.t. x + y = 4, x ≥ 1, y ≥ 1 → x = 3, y = 1, value 9.
        let mut lp = LinearProgram::new(2, Sense::Minimise, vec![int(2), int(3)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(4));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(1));
        lp.add_constraint(vec![(1, int(1))], Relation::Ge, int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(9));
        assert_eq!(s.primal, vec![int(3), int(1)]);
        assert_eq!(s.dual_value, int(9));
    }

    #[test]
    fn negative_right_hand_side() {
        // maximise x s.t. −x ≥ −5.
        let mut lp = LinearProgram::new(1, Sense::Maximise, vec![int(1)]);
        lp.add_constraint(vec![(0, int(-1))], Relation::Ge, int(-5));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(5));
        assert_eq!(s.dual, vec![int(-1)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Maximise, vec![int(1)]);
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1));
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(2));
        assert_eq!(lp.solve(), Err(LpError::Infeasible));

        let mut lp = LinearProgram::new(2, Sense::Maximise, vec![int(1), int(0)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(-1))], Relation::Le, int(1));
        assert_eq!(lp.solve(), Err(LpError::Unbounded));
    }

    #[test]
    fn malformed_rejected() {
        let mut lp = LinearProgram::new(1, Sense::Maximise, vec![int(1)]);
        lp.add_constraint(vec![(3, int(1))], Relation::Le, int(1));
        assert!(matches!(lp.solve(), Err(LpError::Malformed(_))));
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 twice: one artificial cannot leave the basis.
        let mut lp = LinearProgram::new(2, Sense::Maximise, vec![int(1), int(2)]);
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(2));
    }

    #[test]
    fn degenerate_klee_minty_style() {
        // A classic cycling example for Dantzig's rule (Beale); Bland's rule terminates.
        let mut lp = LinearProgram::new(
            4,
            Sense::Maximise,
            vec![ratio(3, 4), int(-150), ratio(1, 50), int(-6)],
        );
        lp.add_constraint(
            vec![
                (0, ratio(1, 4)),
                (1, int(-60)),
                (2, ratio(-1, 25)),
                (3, int(9)),
            ],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(
            vec![
                (0, ratio(1, 2)),
                (1, int(-90)),
                (2, ratio(-1, 50)),
                (3, int(3)),
            ],
            Relation::Le,
            int(0),
        );
        lp.add_constraint(vec![(2, int(1))], Relation::Le, int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, ratio(1, 20));
    }

    /// Brute-force optimum of max c·x, Ax ≤ b, x ≥ 0 in two variables by
    /// intersecting every pair of constraint lines (including the axes).
    fn vertex_enumeration(c: &[i64; 2], rows: &[([i64; 2], i64)]) -> Option<Rational> {
        let mut lines: Vec<([i64; 2], i64)> = rows.to_vec();
        lines.push(([1, 0], 0));
        lines.push(([0, 1], 0));
        let mut best: Option<Rational> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let ([a, b], e) = lines[i];
                let ([p, q], f) = lines[j];
                let det = a * q - b * p;
                if det == 0 {
                    continue;
                }
                let x = ratio(e * q - b * f, det);
                let y = ratio(a * f - e * p, det);
                let zero = int(0);
                if x < zero || y < zero {
                    continue;
                }
                let feasible = rows
                    .iter()
                    .all(|([u, v], w)| int(*u) * x.clone() + int(*v) * y.clone() <= int(*w));
                if feasible {
                    let value = int(c[0]) * x + int(c[1]) * y;
                    if best.as_ref().is_none_or(|b| value > *b) {
                        best = Some(value);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(
            c in [0i64..6, 0i64..6],
            rows in proptest::collection::vec(([1i64..6, 1i64..6], 1i64..20), 1..5),
        ) {
            let mut lp = LinearProgram::new(2, Sense::Maximise, vec![int(c[0]), int(c[1])]);
            for ([a, b], rhs) in &rows {
                lp.add_constraint(vec![(0, int(*a)), (1, int(*b))], Relation::Le, int(*rhs));
            }
            let s = lp.solve().unwrap();
            prop_assert_eq!(Some(s.value.clone()), vertex_enumeration(&c, &rows));
            prop_assert_eq!(s.value, s.dual_value);
        }

        #[test]
        fn float_and_exact_agree(
            c in [0i64..6, 0i64..6],
            rows in proptest::collection::vec(([1i64..6, 1i64..6], 1i64..20), 1..5),
        ) {
            let mut exact = LinearProgram::new(2, Sense::Maximise, vec![int(c[0]), int(c[1])]);
            let mut float = LinearProgram::new(2, Sense::Maximise, vec![c[0] as f64, c[1] as f64]);
            for ([a, b], rhs) in &rows {
                exact.add_constraint(vec![(0, int(*a)), (1, int(*b))], Relation::Le, int(*rhs));
                float.add_constraint(vec![(0, *a as f64), (1, *b as f64)], Relation::Le, *rhs as f64);
            }
            let e = exact.solve().unwrap();
            let f = float.solve().unwrap();
            let e_value = num_traits::ToPrimitive::to_f64(&e.value).unwrap();
            prop_assert!((e_value - f.value).abs() < 1e-9);
        }
    }
}
