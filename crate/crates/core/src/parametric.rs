//! The value function `phi(lambda)` of `P(lambda)` as an explicit
//! piecewise-linear convex function.
//!
//! Breakpoints of `phi` are integral when `(A, b)` is totally unimodular, so
//! the function is assembled from exact solves at every integer of its domain
//! and collinear pieces are merged afterwards.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::scalar::{format_scalar, int, to_integer, Scalar};
use crate::solver::solve_primal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: i64,
    pub end: i64,
    pub intercept: Scalar,
    pub slope: Scalar,
}

impl Segment {
    pub fn at(&self, lambda: &Scalar) -> Scalar {
        &self.intercept + &self.slope * lambda
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFunction {
    /// `phi(0), phi(1), ..., phi(max)`.
    grid: Vec<Scalar>,
    segments: Vec<Segment>,
}

impl PhiFunction {
    /// Builds the function from its values on `0..=grid.len()-1`.
    pub fn from_grid(grid: Vec<Scalar>) -> Self {
        let mut segments: Vec<Segment> = Vec::new();
        for i in 1..grid.len() {
            let slope = &grid[i] - &grid[i - 1];
            let start = (i - 1) as i64;
            match segments.last_mut() {
                Some(last) if last.slope == slope => last.end = i as i64,
                _ => segments.push(Segment {
                    start,
                    end: i as i64,
                    intercept: &grid[i - 1] - &slope * int(start),
                    slope,
                }),
            }
        }
        PhiFunction { grid, segments }
    }

    pub fn grid(&self) -> &[Scalar] {
        &self.grid
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn breakpoints(&self) -> Vec<i64> {
        let mut bps = vec![0];
        bps.extend(self.segments.iter().map(|s| s.end));
        bps
    }

    pub fn slopes(&self) -> Vec<Scalar> {
        self.segments.iter().map(|s| s.slope.clone()).collect()
    }

    pub fn max_level(&self) -> i64 {
        self.grid.len() as i64 - 1
    }

    /// Closed feasibility interval `[lambda_0, lambda_l]`.
    pub fn feasible_range(&self) -> (i64, i64) {
        (0, self.max_level())
    }

    pub fn at_integer(&self, k: i64) -> Option<&Scalar> {
        usize::try_from(k).ok().and_then(|k| self.grid.get(k))
    }

    pub fn eval(&self, lambda: &Scalar) -> Result<Scalar> {
        let (lo, hi) = self.feasible_range();
        if *lambda < int(lo) || *lambda > int(hi) {
            return Err(Error::OutOfRange {
                lambda: format_scalar(lambda),
                low: lo,
                high: hi,
            });
        }
        match self.segments.iter().find(|s| *lambda <= int(s.end)) {
            Some(seg) => Ok(seg.at(lambda)),
            None => Ok(self.grid[0].clone()),
        }
    }

    pub fn is_convex(&self) -> bool {
        self.segments.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    pub fn is_continuous(&self) -> bool {
        self.segments.windows(2).all(|w| {
            let at = int(w[0].end);
            w[0].at(&at) == w[1].at(&at)
        })
    }

    /// Whether `phi` is a single linear piece on `[0, upto]`.
    pub fn is_linear_on(&self, upto: i64) -> bool {
        if upto > self.max_level() {
            return false;
        }
        self.segments.first().is_none_or(|s| s.end >= upto && s.intercept.is_zero())
    }
}

/// `max lambda  s.t.  A x = lambda b, 0 <= x <= 1, lambda >= 0`.
pub fn max_feasible_level(inst: &Instance) -> Result<i64> {
    let n = inst.n();
    let mut cost = vec![Scalar::zero(); n + 1];
    cost[n] = -Scalar::one();
    let mut lp = LinearProgram::minimize(cost);
    for j in 0..n {
        lp.set_bounds(j, Some(int(0)), Some(int(1)));
    }
    for i in 0..inst.m() {
        let mut row: Vec<Scalar> = inst.a()[i].iter().map(|&a| int(a)).collect();
        row.push(int(-inst.b()[i]));
        lp.add_row(row, Relation::Eq, Scalar::zero());
    }
    match lp.solve()? {
        LpOutcome::Optimal(o) => {
            let top = -o.objective;
            to_integer(&top).ok_or_else(|| {
                Error::Internal(format!("largest feasible level {} is not an integer", format_scalar(&top)))
            })
        }
        LpOutcome::Infeasible => Err(Error::Internal("lambda = 0 reported infeasible".into())),
        LpOutcome::Unbounded => Err(Error::Internal("feasible levels unbounded although b != 0".into())),
    }
}

pub fn compute_phi(inst: &Instance) -> Result<PhiFunction> {
    let top = max_feasible_level(inst)?;
    let grid = (0..=top)
        .map(|k| match solve_primal(inst, &int(k))?.into_optimum() {
            Some(o) => Ok(o.objective),
            None => Err(Error::Internal(format!("P({k}) infeasible below the largest feasible level {top}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiFunction::from_grid(grid))
}
