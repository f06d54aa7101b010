//! The parametric primal `P(lambda)`: `min c·x  s.t.  A x = lambda b, 0 <= x <= 1`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::scalar::{format_scalar, int, Scalar};
use crate::solution::SolutionVector;

/// Default bound on `n` for brute-force enumeration.
pub const ENUMERATION_CAP: usize = 20;

/// Multipliers `y` together with the partition induced by the certified primal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub y: Vec<Scalar>,
    /// `x_j = 0`
    pub zero: Vec<usize>,
    /// `0 < x_j < 1`
    pub fractional: Vec<usize>,
    /// `x_j = 1`
    pub one: Vec<usize>,
}

impl DualCertificate {
    pub fn for_solution(y: Vec<Scalar>, x: &SolutionVector) -> Self {
        let (mut zero, mut fractional, mut one) = (Vec::new(), Vec::new(), Vec::new());
        for (j, v) in x.values().iter().enumerate() {
            if v.is_zero() {
                zero.push(j);
            } else if v.is_one() {
                one.push(j);
            } else {
                fractional.push(j);
            }
        }
        DualCertificate {
            y,
            zero,
            fractional,
            one,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Optimum {
    pub x: SolutionVector,
    pub objective: Scalar,
    pub certificate: DualCertificate,
}

#[derive(Clone, Debug)]
pub enum SolveResult {
    Optimal(Optimum),
    Infeasible,
}

impl SolveResult {
    pub fn optimum(&self) -> Option<&Optimum> {
        match self {
            SolveResult::Optimal(o) => Some(o),
            SolveResult::Infeasible => None,
        }
    }

    pub fn into_optimum(self) -> Option<Optimum> {
        match self {
            SolveResult::Optimal(o) => Some(o),
            SolveResult::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SolveResult::Optimal(_))
    }
}

/// Per-column bound override for restricted solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixing {
    Free,
    Zero,
    One,
}

fn primal_program(inst: &Instance, lambda: &Scalar, fixings: &[Fixing]) -> LinearProgram {
    let mut lp = LinearProgram::minimize(inst.c().to_vec());
    for (j, f) in fixings.iter().enumerate() {
        let (lo, hi) = match f {
            Fixing::Free => (0, 1),
            Fixing::Zero => (0, 0),
            Fixing::One => (1, 1),
        };
        lp.set_bounds(j, Some(int(lo)), Some(int(hi)));
    }
    for i in 0..inst.m() {
        let row = inst.a()[i].iter().map(|&a| int(a)).collect();
        lp.add_row(row, Relation::Eq, lambda * int(inst.b()[i]));
    }
    lp
}

fn run_primal(
    inst: &Instance,
    lambda: &Scalar,
    fixings: &[Fixing],
) -> Result<Option<(SolutionVector, Scalar, Vec<Scalar>)>> {
    if lambda.is_negative() {
        return Err(Error::Precondition(format!("lambda = {} is negative", format_scalar(lambda))));
    }
    match primal_program(inst, lambda, fixings).solve()? {
        LpOutcome::Optimal(o) => {
            let x = SolutionVector::new(o.x).map_err(|e| Error::Internal(format!("simplex left the box: {e}")))?;
            Ok(Some((x, o.objective, o.duals)))
        }
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal(
            "P(lambda) reported unbounded over a box-constrained region".into(),
        )),
    }
}

/// Solves `P(lambda)` and attaches an optimality certificate.
///
/// The returned `x` is a simplex vertex, hence binary at integer `lambda`
/// whenever `(A, b)` is totally unimodular.
pub fn solve_primal(inst: &Instance, lambda: &Scalar) -> Result<SolveResult> {
    let fixings = vec![Fixing::Free; inst.n()];
    let Some((x, objective, y)) = run_primal(inst, lambda, &fixings)? else {
        return Ok(SolveResult::Infeasible);
    };
    let certificate = DualCertificate::for_solution(y, &x);
    if !verify_optimality(inst, lambda, &x, &certificate) {
        return Err(Error::Internal(format!(
            "dual certificate failed at lambda = {}",
            format_scalar(lambda)
        )));
    }
    Ok(SolveResult::Optimal(Optimum {
        x,
        objective,
        certificate,
    }))
}

/// Solves `P(lambda)` with some columns pinned. Returns a vertex optimum and its value.
pub fn solve_fixed(
    inst: &Instance,
    lambda: &Scalar,
    fixings: &[Fixing],
) -> Result<Option<(SolutionVector, Scalar)>> {
    assert_eq!(fixings.len(), inst.n());
    Ok(run_primal(inst, lambda, fixings)?.map(|(x, v, _)| (x, v)))
}

/// Optimal binary solution of `P(k)` whose sorted support is lexicographically
/// smallest, so earlier columns are preferred.
///
/// Fixes `x_1, x_2, ...` in turn to the largest value compatible with the
/// previous fixes and `c·x = phi(k)`.
pub fn lexmin_optimal(inst: &Instance, k: i64) -> Result<SolutionVector> {
    let level = int(k);
    let Some(first) = solve_primal(inst, &level)?.into_optimum() else {
        return Err(Error::Infeasible(format!("P({k}) has no feasible solution")));
    };
    let phi = first.objective;
    let mut current = first.x;
    let mut bounds: Vec<(i64, i64)> = vec![(0, 1); inst.n()];

    for j in 0..inst.n() {
        if current.value(j).is_one() {
            bounds[j] = (1, 1);
            continue;
        }
        let mut lp = LinearProgram::minimize(
            (0..inst.n()).map(|i| if i == j { -Scalar::one() } else { Scalar::zero() }).collect(),
        );
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            lp.set_bounds(i, Some(int(lo)), Some(int(hi)));
        }
        for i in 0..inst.m() {
            lp.add_row(inst.a()[i].iter().map(|&a| int(a)).collect(), Relation::Eq, &level * int(inst.b()[i]));
        }
        lp.add_row(inst.c().to_vec(), Relation::Eq, phi.clone());
        let LpOutcome::Optimal(o) = lp.solve()? else {
            return Err(Error::Internal("optimal face became empty during lexmin".into()));
        };
        let v = if o.objective.is_zero() {
            0
        } else if (-&o.objective).is_one() {
            1
        } else {
            return Err(Error::Internal(format!(
                "lexmin step for column {} gave non-integral {}",
                j + 1,
                format_scalar(&o.objective)
            )));
        };
        bounds[j] = (v, v);
        current = SolutionVector::new(o.x).map_err(|e| Error::Internal(e.to_string()))?;
    }

    let bits: Vec<bool> = bounds.iter().map(|&(lo, _)| lo == 1).collect();
    let x = SolutionVector::from_bits(&bits);
    if !inst.is_feasible(&x, &level) || inst.cost_of(&x) != phi {
        return Err(Error::Internal("lexmin result is not optimal".into()));
    }
    Ok(x)
}

/// Checks the optimality conditions for `x` at level `lambda`:
/// `y A_j <= c_j` on zeros, `= c_j` on fractional entries, `>= c_j` on ones,
/// and `c·x = lambda y·b + sum_{j in J1} (c_j - y A_j)`.
pub fn verify_optimality(inst: &Instance, lambda: &Scalar, x: &SolutionVector, cert: &DualCertificate) -> bool {
    if cert.y.len() != inst.m() || !inst.is_feasible(x, lambda) {
        return false;
    }
    if *cert != DualCertificate::for_solution(cert.y.clone(), x) {
        return false;
    }
    let c = inst.c();
    let reduced = |j: usize| &c[j] - inst.dual_column_product(&cert.y, j);
    if cert.zero.iter().any(|&j| reduced(j).is_negative())
        || cert.fractional.iter().any(|&j| !reduced(j).is_zero())
        || cert.one.iter().any(|&j| reduced(j).is_positive())
    {
        return false;
    }
    let yb: Scalar = cert
        .y
        .iter()
        .zip(inst.b())
        .map(|(y, &b)| y * int(b))
        .sum();
    let ones: Scalar = cert.one.iter().map(|&j| reduced(j)).sum();
    inst.cost_of(x) == lambda * yb + ones
}

/// Every `x in {0,1}^n` with `A x = k b`, ordered lexicographically by support.
pub fn enumerate_binary_feasible(inst: &Instance, k: i64) -> Result<Vec<SolutionVector>> {
    enumerate_binary_feasible_capped(inst, k, ENUMERATION_CAP)
}

pub fn enumerate_binary_feasible_capped(inst: &Instance, k: i64, cap: usize) -> Result<Vec<SolutionVector>> {
    let n = inst.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "columns",
            size: n as u128,
            cap: cap as u128,
        });
    }
    let m = inst.m();
    // reach[j][i]: range of row i's sum over columns j.. .
    let mut reach = vec![vec![(0i64, 0i64); m]; n + 1];
    for j in (0..n).rev() {
        let (done, todo) = reach.split_at_mut(j + 1);
        for (i, (cell, &(lo, hi))) in done[j].iter_mut().zip(&todo[0]).enumerate() {
            let a = inst.entry(i, j);
            *cell = (lo + a.min(0), hi + a.max(0));
        }
    }
    let mut residual: Vec<i64> = inst.b().iter().map(|&b| b * k).collect();
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    search(inst, &reach, 0, &mut residual, &mut chosen, &mut out);
    out.sort();
    Ok(out.into_iter().map(|s| SolutionVector::from_support(n, &s)).collect())
}

fn search(
    inst: &Instance,
    reach: &[Vec<(i64, i64)>],
    j: usize,
    residual: &mut [i64],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let within = residual
        .iter()
        .zip(&reach[j])
        .all(|(r, (lo, hi))| lo <= r && r <= hi);
    if !within {
        return;
    }
    if j == inst.n() {
        out.push(chosen.clone());
        return;
    }
    for (i, r) in residual.iter_mut().enumerate() {
        *r -= inst.entry(i, j);
    }
    chosen.push(j);
    search(inst, reach, j + 1, residual, chosen, out);
    chosen.pop();
    for (i, r) in residual.iter_mut().enumerate() {
        *r += inst.entry(i, j);
    }
    search(inst, reach, j + 1, residual, chosen, out);
}
