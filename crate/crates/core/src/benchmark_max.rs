//! The max benchmark `mu(k)`, the pruned problem and the bounds tying them.
//!
//! `mu(k)` is computed from the explicit LP over duals `y` and prices `z` on
//! the winning columns, and independently as `k (phi(k+1) - phi(k))`. The two
//! must agree exactly.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::parametric::{compute_phi, PhiFunction};
use crate::scalar::{int, Scalar};
use crate::solution::SolutionVector;
use crate::solver::lexmin_optimal;

#[derive(Clone, Debug)]
pub struct MaxBenchResult {
    pub mu: Scalar,
    /// Prices on `winners`, same order.
    pub z: Vec<Scalar>,
    pub y: Vec<Scalar>,
    pub x_star: SolutionVector,
    pub losers: Vec<usize>,
    pub winners: Vec<usize>,
}

impl MaxBenchResult {
    /// The LP constraints, rechecked exactly.
    pub fn is_feasible_for(&self, inst: &Instance) -> bool {
        let c = inst.c();
        self.losers.iter().all(|&j| inst.dual_column_product(&self.y, j) <= c[j])
            && self.winners.iter().zip(&self.z).all(|(&j, z)| {
                inst.dual_column_product(&self.y, j) >= *z && *z >= c[j]
            })
    }

    /// `y A_j = z_j` on every winner.
    pub fn prices_are_tight(&self, inst: &Instance) -> bool {
        self.winners
            .iter()
            .zip(&self.z)
            .all(|(&j, z)| inst.dual_column_product(&self.y, j) == *z)
    }
}

/// `max sum z_J1  s.t.  y A_J0 <= c_J0, y A_J1 >= z_J1, z_J1 >= c_J1`
/// with `(J0, J1)` taken from the lexmin optimum of `P(k)`.
pub fn solve_bmax(inst: &Instance, k: i64) -> Result<MaxBenchResult> {
    let x_star = lexmin_optimal(inst, k)?;
    let winners = x_star.support();
    let losers: Vec<usize> = (0..inst.n()).filter(|j| !winners.contains(j)).collect();
    let m = inst.m();
    let w = winners.len();

    // variables: y_0..y_{m-1} (free), then z for each winner
    let mut cost = vec![Scalar::zero(); m + w];
    for c in cost.iter_mut().skip(m) {
        *c = -Scalar::one();
    }
    let mut lp = LinearProgram::minimize(cost);
    for i in 0..m {
        lp.set_bounds(i, None, None);
    }
    for (t, &j) in winners.iter().enumerate() {
        lp.set_bounds(m + t, Some(inst.c()[j].clone()), None);
    }
    let column = |j: usize| -> Vec<Scalar> {
        let mut row: Vec<Scalar> = (0..m).map(|i| int(inst.entry(i, j))).collect();
        row.resize(m + w, Scalar::zero());
        row
    };
    for &j in &losers {
        lp.add_row(column(j), Relation::Le, inst.c()[j].clone());
    }
    for (t, &j) in winners.iter().enumerate() {
        let mut row = column(j);
        row[m + t] = -Scalar::one();
        lp.add_row(row, Relation::Ge, Scalar::zero());
    }

    match lp.solve()? {
        LpOutcome::Optimal(o) => Ok(MaxBenchResult {
            mu: -o.objective,
            y: o.x[..m].to_vec(),
            z: o.x[m..].to_vec(),
            x_star,
            losers,
            winners,
        }),
        LpOutcome::Unbounded => Err(Error::Unbounded(format!(
            "max benchmark at k = {k} is unbounded; P({}) is infeasible (monopoly)",
            k + 1
        ))),
        LpOutcome::Infeasible => Err(Error::Internal(format!(
            "max benchmark at k = {k} infeasible although P({k}) has an optimum"
        ))),
    }
}

/// `k (phi(k+1) - phi(k))`.
pub fn mu_via_phi(f: &PhiFunction, k: i64) -> Result<Scalar> {
    let (_, hi) = f.feasible_range();
    if k < 0 || k + 1 > hi {
        return Err(Error::OutOfRange {
            lambda: (k + 1).to_string(),
            low: 0,
            high: hi,
        });
    }
    let upper = f.at_integer(k + 1).expect("in range");
    let lower = f.at_integer(k).expect("in range");
    Ok(int(k) * (upper - lower))
}

#[derive(Clone, Debug)]
pub struct PrunedInstance {
    pub instance: Instance,
    /// `parent[i]` is the parent column of retained column `i`.
    pub parent: Vec<usize>,
    /// Lexmin optimum of `P(k+1)` on the parent.
    pub xbar: SolutionVector,
}

/// Drops every column unused by the lexmin optimum of `P(k+1)`.
pub fn prune(inst: &Instance, k: i64) -> Result<PrunedInstance> {
    let xbar = lexmin_optimal(inst, k + 1)?;
    let parent = xbar.support();
    let instance = inst.restrict(&parent)?;
    Ok(PrunedInstance {
        instance,
        parent,
        xbar,
    })
}

#[derive(Clone, Debug)]
pub struct PrunedBenchmark {
    pub pruned: PrunedInstance,
    pub bench: MaxBenchResult,
    pub phi: PhiFunction,
    /// `k (phi~(k+1) - phi~(k))`
    pub mu_tilde_via_phi: Scalar,
}

impl PrunedBenchmark {
    pub fn mu_tilde(&self) -> &Scalar {
        &self.bench.mu
    }
}

pub fn pruned_benchmark(inst: &Instance, k: i64) -> Result<PrunedBenchmark> {
    let pruned = prune(inst, k)?;
    let bench = solve_bmax(&pruned.instance, k)?;
    let phi = compute_phi(&pruned.instance)?;
    let mu_tilde_via_phi = mu_via_phi(&phi, k)?;
    Ok(PrunedBenchmark {
        pruned,
        bench,
        phi,
        mu_tilde_via_phi,
    })
}

/// Max benchmark of the pruned problem; both computations must agree.
pub fn mu_tilde(inst: &Instance, k: i64) -> Result<Scalar> {
    let pb = pruned_benchmark(inst, k)?;
    if pb.bench.mu != pb.mu_tilde_via_phi {
        return Err(Error::Internal(format!(
            "pruned max benchmark {} differs from k (phi~(k+1) - phi~(k)) = {}",
            pb.bench.mu, pb.mu_tilde_via_phi
        )));
    }
    Ok(pb.bench.mu)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandwichVerdict {
    Holds,
    Violated(Side),
}

/// `mu~ <= mu <= (k+1) mu~`
pub fn check_sandwich(mu: &Scalar, mu_tilde: &Scalar, k: i64) -> SandwichVerdict {
    if mu_tilde > mu {
        SandwichVerdict::Violated(Side::Lower)
    } else if *mu > int(k + 1) * mu_tilde {
        SandwichVerdict::Violated(Side::Upper)
    } else {
        SandwichVerdict::Holds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn mu_on_fixtures() {
        let d1 = solve_bmax(&fixtures::d1(), 1).unwrap();
        assert_eq!(d1.mu, int(2));
        assert_eq!(d1.winners, vec![0]);
        assert_eq!(d1.z, vec![int(2)]);
        assert!(d1.is_feasible_for(&fixtures::d1()));
        assert!(d1.prices_are_tight(&fixtures::d1()));

        let d2 = solve_bmax(&fixtures::d2(), 1).unwrap();
        assert_eq!(d2.mu, int(6));

        assert!(matches!(solve_bmax(&fixtures::d3(), 1), Err(Error::Unbounded(_))));
    }

    #[test]
    fn mu_from_phi() {
        let phi = |i: Instance| compute_phi(&i).unwrap();
        assert_eq!(mu_via_phi(&phi(fixtures::d1()), 1).unwrap(), int(2));
        assert_eq!(mu_via_phi(&phi(fixtures::d2()), 1).unwrap(), int(6));
        assert_eq!(mu_via_phi(&phi(fixtures::d4()), 2).unwrap(), int(2));
        assert!(mu_via_phi(&phi(fixtures::d1()), 2).is_err());
    }

    #[test]
    fn pruning() {
        let p = prune(&fixtures::d2(), 1).unwrap();
        assert_eq!(p.parent, vec![0, 1, 2, 3]);
        assert_eq!(p.instance.labels(), &["e1", "e2", "e3", "e4"]);
        assert_eq!(prune(&fixtures::d1(), 1).unwrap().parent, vec![0, 1]);
        assert_eq!(prune(&fixtures::d4(), 2).unwrap().parent, vec![0, 1, 2]);
        assert!(prune(&fixtures::d3(), 1).is_err());
    }

    #[test]
    fn mu_tilde_values() {
        assert_eq!(mu_tilde(&fixtures::d2(), 1).unwrap(), int(6));
        assert_eq!(mu_tilde(&fixtures::d1(), 1).unwrap(), int(2));
        assert_eq!(mu_tilde(&fixtures::d4(), 2).unwrap(), int(2));
        let pb = pruned_benchmark(&fixtures::d2(), 1).unwrap();
        assert_eq!(pb.phi.grid()[1..], [int(2), int(8)]);
    }

    #[test]
    fn sandwich() {
        assert_eq!(check_sandwich(&int(6), &int(6), 1), SandwichVerdict::Holds);
        assert_eq!(check_sandwich(&int(2), &int(2), 2), SandwichVerdict::Holds);
        assert_eq!(check_sandwich(&int(5), &int(1), 1), SandwichVerdict::Violated(Side::Upper));
        assert_eq!(check_sandwich(&int(1), &int(2), 1), SandwichVerdict::Violated(Side::Lower));
    }
}
