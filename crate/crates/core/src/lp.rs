//! Dense bounded-variable primal simplex over exact rationals.
//!
//! Every LP in the crate (the primal `P(lambda)`, its restrictions, the
//! max-benchmark program and the min-benchmark pricing programs) goes through
//! [`LinearProgram::solve`]. Pivoting follows Bland's rule in both phases, so
//! the solver terminates and is deterministic.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const ITERATION_GUARD: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Scalar>,
    relation: Relation,
    rhs: Scalar,
}

/// `min cost·x` subject to linear rows and per-variable bounds.
///
/// Variables default to `[0, +inf)`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    cost: Vec<Scalar>,
    lower: Vec<Option<Scalar>>,
    upper: Vec<Option<Scalar>>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct LpOptimum {
    pub x: Vec<Scalar>,
    pub objective: Scalar,
    /// One multiplier per row, sign convention `cost_j - y·a_j` = reduced cost.
    pub duals: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn minimize(cost: Vec<Scalar>) -> Self {
        let n = cost.len();
        LinearProgram {
            cost,
            lower: vec![Some(Scalar::zero()); n],
            upper: vec![None; n],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.cost.len()
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Scalar>, upper: Option<Scalar>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn add_row(&mut self, coeffs: Vec<Scalar>, relation: Relation, rhs: Scalar) {
        assert_eq!(coeffs.len(), self.cost.len(), "row width mismatch");
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        let Some(form) = StandardForm::build(self) else {
            return Ok(LpOutcome::Infeasible);
        };
        let mut tab = Tableau::new(&form);

        let phase_one: Vec<Scalar> = (0..form.num_cols())
            .map(|c| {
                if c >= form.first_artificial {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        if tab.run(&phase_one)? == Phase::Unbounded {
            return Err(Error::Internal("phase one reported unbounded".into()));
        }
        let infeasibility: Scalar = (form.first_artificial..form.num_cols())
            .map(|c| tab.column_value(c))
            .sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        tab.retire_artificials(form.first_artificial);

        if tab.run(&form.cost)? == Phase::Unbounded {
            return Ok(LpOutcome::Unbounded);
        }
        Ok(LpOutcome::Optimal(form.extract(self, &tab)))
    }
}

/// How a standard-form column maps back to an original variable.
#[derive(Clone, Debug)]
enum Origin {
    /// `x = lower + col`
    Shifted(usize, Scalar),
    /// `x = upper - col`
    Mirrored(usize, Scalar),
    /// positive part of a free variable
    Positive(usize),
    /// negative part of a free variable
    Negative(usize),
    Slack,
    Artificial,
}

/// `M col = rhs`, `0 <= col <= upper`, rows sign-normalized so `rhs >= 0`.
struct StandardForm {
    matrix: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    upper: Vec<Option<Scalar>>,
    cost: Vec<Scalar>,
    origin: Vec<Origin>,
    row_sign: Vec<bool>,
    first_artificial: usize,
}

impl StandardForm {
    fn num_cols(&self) -> usize {
        self.upper.len()
    }

    /// Returns `None` when some variable has `lower > upper`.
    fn build(lp: &LinearProgram) -> Option<Self> {
        let m = lp.rows.len();
        let mut columns: Vec<Vec<Scalar>> = Vec::new();
        let mut upper = Vec::new();
        let mut cost = Vec::new();
        let mut origin = Vec::new();
        let mut rhs: Vec<Scalar> = lp.rows.iter().map(|r| r.rhs.clone()).collect();

        for v in 0..lp.num_vars() {
            let col: Vec<Scalar> = lp.rows.iter().map(|r| r.coeffs[v].clone()).collect();
            match (&lp.lower[v], &lp.upper[v]) {
                (Some(lo), hi) => {
                    if let Some(hi) = hi {
                        if hi < lo {
                            return None;
                        }
                    }
                    for (r, a) in col.iter().enumerate() {
                        rhs[r] -= a * lo;
                    }
                    upper.push(hi.as_ref().map(|hi| hi - lo));
                    cost.push(lp.cost[v].clone());
                    origin.push(Origin::Shifted(v, lo.clone()));
                    columns.push(col);
                }
                (None, Some(hi)) => {
                    for (r, a) in col.iter().enumerate() {
                        rhs[r] -= a * hi;
                    }
                    upper.push(None);
                    cost.push(-lp.cost[v].clone());
                    origin.push(Origin::Mirrored(v, hi.clone()));
                    columns.push(col.iter().map(|a| -a).collect());
                }
                (None, None) => {
                    upper.push(None);
                    cost.push(lp.cost[v].clone());
                    origin.push(Origin::Positive(v));
                    columns.push(col.clone());
                    upper.push(None);
                    cost.push(-lp.cost[v].clone());
                    origin.push(Origin::Negative(v));
                    columns.push(col.iter().map(|a| -a).collect());
                }
            }
        }

        for (r, row) in lp.rows.iter().enumerate() {
            let sign = match row.relation {
                Relation::Le => 1,
                Relation::Ge => -1,
                Relation::Eq => continue,
            };
            let mut col = vec![Scalar::zero(); m];
            col[r] = Scalar::from_integer(sign.into());
            upper.push(None);
            cost.push(Scalar::zero());
            origin.push(Origin::Slack);
            columns.push(col);
        }

        let row_sign: Vec<bool> = rhs.iter().map(|v| !v.is_negative()).collect();
        let first_artificial = columns.len();
        for r in 0..m {
            let mut col = vec![Scalar::zero(); m];
            col[r] = Scalar::one();
            upper.push(None);
            cost.push(Scalar::zero());
            origin.push(Origin::Artificial);
            columns.push(col);
        }

        let total = columns.len();
        let mut matrix = vec![vec![Scalar::zero(); total]; m];
        for (c, col) in columns.iter().enumerate() {
            for r in 0..m {
                let flip = !row_sign[r] && c < first_artificial;
                matrix[r][c] = if flip { -col[r].clone() } else { col[r].clone() };
            }
        }
        for r in 0..m {
            if !row_sign[r] {
                rhs[r] = -rhs[r].clone();
            }
        }

        Some(StandardForm {
            matrix,
            rhs,
            upper,
            cost,
            origin,
            row_sign,
            first_artificial,
        })
    }

    fn extract(&self, lp: &LinearProgram, tab: &Tableau) -> LpOptimum {
        let mut x = vec![Scalar::zero(); lp.num_vars()];
        for (c, origin) in self.origin.iter().enumerate() {
            let value = tab.column_value(c);
            match origin {
                Origin::Shifted(v, lo) => x[*v] = lo + value,
                Origin::Mirrored(v, hi) => x[*v] = hi - value,
                Origin::Positive(v) => x[*v] += value,
                Origin::Negative(v) => x[*v] -= value,
                Origin::Slack | Origin::Artificial => {}
            }
        }
        let objective = x.iter().zip(&lp.cost).map(|(a, b)| a * b).sum();

        // y' = c_B B^-1 where B^-1 sits in the artificial block of the tableau.
        let m = self.rhs.len();
        let duals = (0..m)
            .map(|r| {
                let col = self.first_artificial + r;
                let y: Scalar = (0..m)
                    .map(|i| &self.cost[tab.basis[i]] * &tab.rows[i][col])
                    .sum();
                if self.row_sign[r] {
                    y
                } else {
                    -y
                }
            })
            .collect();

        LpOptimum {
            x,
            objective,
            duals,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic(usize),
    AtLower,
    AtUpper,
}

#[derive(Debug, PartialEq, Eq)]
enum Phase {
    Optimal,
    Unbounded,
}

enum Exit {
    BoundFlip,
    Row { row: usize, to_upper: bool },
}

struct Tableau {
    rows: Vec<Vec<Scalar>>,
    basis: Vec<usize>,
    value: Vec<Scalar>,
    state: Vec<State>,
    upper: Vec<Option<Scalar>>,
    may_enter: Vec<bool>,
}

impl Tableau {
    fn new(form: &StandardForm) -> Self {
        let m = form.rhs.len();
        let n = form.num_cols();
        let mut state = vec![State::AtLower; n];
        let basis: Vec<usize> = (0..m).map(|r| form.first_artificial + r).collect();
        for (r, &c) in basis.iter().enumerate() {
            state[c] = State::Basic(r);
        }
        Tableau {
            rows: form.matrix.clone(),
            basis,
            value: form.rhs.clone(),
            state,
            upper: form.upper.clone(),
            may_enter: (0..n).map(|c| c < form.first_artificial).collect(),
        }
    }

    fn column_value(&self, c: usize) -> Scalar {
        match self.state[c] {
            State::Basic(r) => self.value[r].clone(),
            State::AtLower => Scalar::zero(),
            State::AtUpper => self.upper[c].clone().expect("at upper without a bound"),
        }
    }

    fn reduced_cost(&self, cost: &[Scalar], c: usize) -> Scalar {
        let mut d = cost[c].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            let a = &self.rows[r][c];
            if !a.is_zero() && !cost[b].is_zero() {
                d -= &cost[b] * a;
            }
        }
        d
    }

    fn entering(&self, cost: &[Scalar]) -> Option<(usize, bool)> {
        for c in 0..self.state.len() {
            if !self.may_enter[c] || matches!(self.upper[c], Some(ref u) if u.is_zero()) {
                continue;
            }
            let increase = match self.state[c] {
                State::Basic(_) => continue,
                State::AtLower => true,
                State::AtUpper => false,
            };
            let d = self.reduced_cost(cost, c);
            if (increase && d.is_negative()) || (!increase && d.is_positive()) {
                return Some((c, increase));
            }
        }
        None
    }

    fn run(&mut self, cost: &[Scalar]) -> Result<Phase> {
        for _ in 0..ITERATION_GUARD {
            let Some((col, increase)) = self.entering(cost) else {
                return Ok(Phase::Optimal);
            };
            let Some((step, exit)) = self.ratio_test(col, increase) else {
                return Ok(Phase::Unbounded);
            };
            self.apply(col, increase, step, exit);
        }
        Err(Error::Internal(format!(
            "simplex exceeded {ITERATION_GUARD} pivots (cycling guard)"
        )))
    }

    fn ratio_test(&self, col: usize, increase: bool) -> Option<(Scalar, Exit)> {
        let mut best: Option<(Scalar, Exit)> = self.upper[col].clone().map(|u| (u, Exit::BoundFlip));
        for r in 0..self.rows.len() {
            let a = &self.rows[r][col];
            if a.is_zero() {
                continue;
            }
            // basic value moves by -alpha * step
            let alpha = if increase { a.clone() } else { -a.clone() };
            let (limit, to_upper) = if alpha.is_positive() {
                (&self.value[r] / &alpha, false)
            } else {
                match &self.upper[self.basis[r]] {
                    Some(u) => ((u - &self.value[r]) / -alpha, true),
                    None => continue,
                }
            };
            let better = match &best {
                None => true,
                Some((t, Exit::BoundFlip)) => limit < *t,
                Some((t, Exit::Row { row, .. })) => {
                    limit < *t || (limit == *t && self.basis[r] < self.basis[*row])
                }
            };
            if better {
                best = Some((limit, Exit::Row { row: r, to_upper }));
            }
        }
        best
    }

    fn apply(&mut self, col: usize, increase: bool, step: Scalar, exit: Exit) {
        if !step.is_zero() {
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if a.is_zero() {
                    continue;
                }
                let delta = a * &step;
                if increase {
                    self.value[r] -= delta;
                } else {
                    self.value[r] += delta;
                }
            }
        }
        match exit {
            Exit::BoundFlip => {
                self.state[col] = if increase { State::AtUpper } else { State::AtLower };
            }
            Exit::Row { row, to_upper } => {
                let start = if increase {
                    Scalar::zero()
                } else {
                    self.upper[col].clone().expect("decreasing from an unbounded column")
                };
                let entering_value = if increase { start + step } else { start - step };
                let leaving = self.basis[row];
                self.state[leaving] = if to_upper { State::AtUpper } else { State::AtLower };
                self.pivot(row, col);
                self.value[row] = entering_value;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for a in self.rows[row].iter_mut() {
                if !a.is_zero() {
                    *a /= &p;
                }
            }
        }
        let pivot_row = self.rows[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col].clone();
            if f.is_zero() {
                continue;
            }
            for (a, pr) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *a -= &f * pr;
                }
            }
        }
        self.basis[row] = col;
        self.state[col] = State::Basic(row);
    }

    /// Fixes artificials at zero and pivots basic ones out where possible.
    /// Rows where no structural column has a nonzero entry are redundant and
    /// keep their artificial, pinned at zero.
    fn retire_artificials(&mut self, first_artificial: usize) {
        for c in first_artificial..self.state.len() {
            self.may_enter[c] = false;
            self.upper[c] = Some(Scalar::zero());
        }
        for r in 0..self.rows.len() {
            if self.basis[r] < first_artificial {
                continue;
            }
            let replacement = (0..first_artificial)
                .find(|&c| !matches!(self.state[c], State::Basic(_)) && !self.rows[r][c].is_zero());
            if let Some(c) = replacement {
                let v = self.column_value(c);
                let art = self.basis[r];
                self.state[art] = State::AtLower;
                self.pivot(r, c);
                self.value[r] = v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn optimum(lp: &LinearProgram) -> LpOptimum {
        match lp.solve().unwrap() {
            LpOutcome::Optimal(o) => o,
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn small_le_problem() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6  => x = 8/5, y = 6/5
        let mut lp = LinearProgram::minimize(vec![int(-1), int(-1)]);
        lp.add_row(vec![int(1), int(2)], Relation::Le, int(4));
        lp.add_row(vec![int(3), int(1)], Relation::Le, int(6));
        let o = optimum(&lp);
        assert_eq!(o.x, vec![ratio(8, 5), ratio(6, 5)]);
        assert_eq!(o.objective, ratio(-14, 5));
        // duals of a min problem with <= rows are nonpositive
        assert_eq!(o.duals, vec![ratio(-2, 5), ratio(-1, 5)]);
    }

    #[test]
    fn free_and_mirrored_variables() {
        // min x - y, x free, y <= 3 (no lower), x >= y - 1, x - y <= 10
        let mut lp = LinearProgram::minimize(vec![int(1), int(-1)]);
        lp.set_bounds(0, None, None);
        lp.set_bounds(1, None, Some(int(3)));
        lp.add_row(vec![int(1), int(-1)], Relation::Ge, int(-1));
        lp.add_row(vec![int(1), int(-1)], Relation::Le, int(10));
        let o = optimum(&lp);
        assert_eq!(o.objective, int(-1));
        assert_eq!(&o.x[0] - &o.x[1], int(-1));
        assert!(o.x[1] <= int(3));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::minimize(vec![int(1)]);
        lp.set_bounds(0, Some(int(0)), Some(int(1)));
        lp.add_row(vec![int(1)], Relation::Eq, int(2));
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Infeasible));

        let mut lp = LinearProgram::minimize(vec![int(-1)]);
        lp.add_row(vec![int(1)], Relation::Ge, int(2));
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Unbounded));

        let mut lp = LinearProgram::minimize(vec![int(0)]);
        lp.set_bounds(0, Some(int(2)), Some(int(1)));
        assert!(matches!(lp.solve().unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn redundant_equalities() {
        // x1 + x2 = 1, -x1 - x2 = -1 (dependent rows), 0 <= x <= 1, min x1 + 2 x2
        let mut lp = LinearProgram::minimize(vec![int(1), int(2)]);
        lp.set_bounds(0, Some(int(0)), Some(int(1)));
        lp.set_bounds(1, Some(int(0)), Some(int(1)));
        lp.add_row(vec![int(1), int(1)], Relation::Eq, int(1));
        lp.add_row(vec![int(-1), int(-1)], Relation::Eq, int(-1));
        let o = optimum(&lp);
        assert_eq!(o.x, vec![int(1), int(0)]);
        // x1 sits at its upper bound, x2 at its lower bound
        let ya = &o.duals[0] - &o.duals[1];
        assert!(int(1) - &ya <= int(0));
        assert!(int(2) - &ya >= int(0));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling LP; Bland's rule must terminate.
        let mut lp = LinearProgram::minimize(vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)]);
        lp.add_row(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0));
        lp.add_row(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0));
        lp.add_row(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
        let o = optimum(&lp);
        assert_eq!(o.objective, ratio(-1, 20));
    }
}
