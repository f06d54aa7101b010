//! The min benchmark `nu(k)`, feasible collections and `Gamma_c`.
//!
//! `nu(k)` is NP-hard in general, so it is computed by enumeration at desk
//! scale. A pricing `z` must
//!
//! 1. keep losing costs and not undercut winning costs,
//! 2. keep `x*` optimal among all binary solutions of `P(k)`,
//! 3. give every winner `j` an equally priced alternative avoiding `j`.
//!
//! With `z` fixed on the losers, the only thing an alternative `x` contributes
//! to (2) and (3) is the set of winners it drops and its cost on the losers,
//! so alternatives are grouped by dropped set and only the cheapest of each
//! group is kept. `nu` is then the minimum over covers of the winners by
//! dropped sets, searched branch-and-bound style.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::scalar::{int, Scalar};
use crate::solution::SolutionVector;
use crate::solver::{enumerate_binary_feasible, lexmin_optimal, solve_fixed, solve_primal, Fixing};
use crate::decompose::decompose;

/// `|J1|` limit for the witness search.
pub const WINNER_CAP: usize = 12;

/// Selection limit for [`nu_exhaustive`].
pub const SELECTION_CAP: u128 = 200_000;

/// Limit on the number of collections visited.
pub const COLLECTION_CAP: u128 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleCollection {
    pub members: Vec<SolutionVector>,
    /// Costliest member under `c`.
    pub gamma: Scalar,
}

fn unit_solutions(inst: &Instance) -> Result<Vec<(u64, Scalar, SolutionVector)>> {
    Ok(enumerate_binary_feasible(inst, 1)?
        .into_iter()
        .map(|x| {
            let mask = x.support().iter().fold(0u64, |m, &j| m | (1 << j));
            let cost = inst.cost_of(&x);
            (mask, cost, x)
        })
        .collect())
}

/// Visits every set of `size` unit solutions with pairwise disjoint supports.
/// `bound` lets the visitor prune branches whose running max cost is too high.
fn visit_collections<F, B>(
    units: &[(u64, Scalar, SolutionVector)],
    size: usize,
    bound: B,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[usize], &Scalar),
    B: Fn(&Scalar) -> bool,
{
    #[allow(clippy::too_many_arguments)]
    fn walk<F: FnMut(&[usize], &Scalar), B: Fn(&Scalar) -> bool>(
        units: &[(u64, Scalar, SolutionVector)],
        size: usize,
        start: usize,
        used: u64,
        worst: Option<&Scalar>,
        chosen: &mut Vec<usize>,
        visited: &mut u128,
        bound: &B,
        visit: &mut F,
    ) -> Result<()> {
        if chosen.len() == size {
            *visited += 1;
            if *visited > COLLECTION_CAP {
                return Err(Error::CapExceeded {
                    what: "feasible collections",
                    size: *visited,
                    cap: COLLECTION_CAP,
                });
            }
            visit(chosen, worst.expect("size >= 1"));
            return Ok(());
        }
        for i in start..units.len() {
            let (mask, cost, _) = &units[i];
            if used & mask != 0 {
                continue;
            }
            let next = match worst {
                Some(w) if w >= cost => w,
                _ => cost,
            };
            if !bound(next) {
                continue;
            }
            chosen.push(i);
            walk(units, size, i + 1, used | mask, Some(next), chosen, visited, bound, visit)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut visited = 0u128;
    walk(units, size, 0, 0, None, &mut Vec::new(), &mut visited, &bound, &mut visit)
}

/// All sets of `k+1` binary unit solutions with pairwise disjoint supports.
pub fn enumerate_feasible_collections(inst: &Instance, k: i64) -> Result<Vec<FeasibleCollection>> {
    let units = unit_solutions(inst)?;
    let mut out = Vec::new();
    visit_collections(&units, (k + 1) as usize, |_| true, |chosen, worst| {
        out.push(FeasibleCollection {
            members: chosen.iter().map(|&i| units[i].2.clone()).collect(),
            gamma: worst.clone(),
        });
    })?;
    Ok(out)
}

/// `Gamma_c = min over collections of the costliest member`, with the
/// attaining collection.
pub fn gamma_star_with_collection(inst: &Instance, k: i64) -> Result<FeasibleCollection> {
    let units = unit_solutions(inst)?;
    let best: std::cell::RefCell<Option<FeasibleCollection>> = std::cell::RefCell::new(None);
    visit_collections(
        &units,
        (k + 1) as usize,
        |worst| best.borrow().as_ref().is_none_or(|b| *worst < b.gamma),
        |chosen, worst| {
            let mut b = best.borrow_mut();
            if b.as_ref().is_none_or(|b| *worst < b.gamma) {
                *b = Some(FeasibleCollection {
                    members: chosen.iter().map(|&i| units[i].2.clone()).collect(),
                    gamma: worst.clone(),
                });
            }
        },
    )?;
    best.into_inner()
        .ok_or_else(|| Error::Infeasible(format!("no feasible collection of {} disjoint unit solutions", k + 1)))
}

pub fn gamma_star(inst: &Instance, k: i64) -> Result<Scalar> {
    Ok(gamma_star_with_collection(inst, k)?.gamma)
}

/// Prices for every column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PricingVector {
    pub z: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct MinBenchResult {
    pub nu: Scalar,
    pub pricing: PricingVector,
    pub x_star: SolutionVector,
    /// `witnesses[j]` avoids column `j` and has the same price as `x*`.
    pub witnesses: Vec<SolutionVector>,
    /// Number of pricing LPs solved.
    pub lps: usize,
}

#[derive(Clone, Debug)]
struct Alternative {
    /// Positions (into the winner list) of the winners this solution drops.
    dropped: Vec<usize>,
    /// Cost of the solution on the losing columns.
    loser_cost: Scalar,
    representative: SolutionVector,
}

struct PricingSearch<'a> {
    inst: &'a Instance,
    winners: Vec<usize>,
    alternatives: Vec<Alternative>,
    lps: usize,
    seen: HashSet<Vec<usize>>,
    best: Option<(Scalar, Vec<Scalar>, Vec<usize>)>,
}

impl PricingSearch<'_> {
    fn program(&self, selected: &[usize]) -> LinearProgram {
        let w = self.winners.len();
        let mut lp = LinearProgram::minimize(vec![Scalar::one(); w]);
        for (t, &j) in self.winners.iter().enumerate() {
            lp.set_bounds(t, Some(self.inst.c()[j].clone()), None);
        }
        let row = |alt: &Alternative| {
            let mut r = vec![Scalar::zero(); w];
            for &t in &alt.dropped {
                r[t] = Scalar::one();
            }
            r
        };
        for alt in &self.alternatives {
            lp.add_row(row(alt), Relation::Le, alt.loser_cost.clone());
        }
        for &s in selected {
            let alt = &self.alternatives[s];
            lp.add_row(row(alt), Relation::Eq, alt.loser_cost.clone());
        }
        lp
    }

    fn branch(&mut self, selected: &mut Vec<usize>) -> Result<()> {
        let mut key = selected.clone();
        key.sort_unstable();
        if !self.seen.insert(key) {
            return Ok(());
        }
        self.lps += 1;
        let o = match self.program(selected).solve()? {
            LpOutcome::Optimal(o) => o,
            LpOutcome::Infeasible => return Ok(()),
            LpOutcome::Unbounded => return Err(Error::Internal("pricing LP unbounded below".into())),
        };
        if let Some((best, _, _)) = &self.best {
            if o.objective >= *best {
                return Ok(());
            }
        }
        let uncovered = (0..self.winners.len())
            .find(|t| !selected.iter().any(|&s| self.alternatives[s].dropped.contains(t)));
        let Some(t) = uncovered else {
            self.best = Some((o.objective, o.x, selected.clone()));
            return Ok(());
        };
        let options: Vec<usize> = (0..self.alternatives.len())
            .filter(|&a| self.alternatives[a].dropped.contains(&t))
            .collect();
        for a in options {
            selected.push(a);
            self.branch(selected)?;
            selected.pop();
        }
        Ok(())
    }
}

/// Exact `nu(k)` with an attaining pricing and per-column witnesses.
pub fn nu_bruteforce(inst: &Instance, k: i64) -> Result<MinBenchResult> {
    let x_star = lexmin_optimal(inst, k)?;
    let winners = x_star.support();
    if winners.len() > WINNER_CAP {
        return Err(Error::CapExceeded {
            what: "winning columns",
            size: winners.len() as u128,
            cap: WINNER_CAP as u128,
        });
    }
    let feasible = enumerate_binary_feasible(inst, k)?;

    let mut groups: BTreeMap<Vec<usize>, (Scalar, SolutionVector)> = BTreeMap::new();
    for x in &feasible {
        let dropped: Vec<usize> = (0..winners.len())
            .filter(|&t| x.value(winners[t]).is_zero())
            .collect();
        if dropped.is_empty() {
            continue;
        }
        let loser_cost: Scalar = (0..inst.n())
            .filter(|j| !winners.contains(j))
            .map(|j| x.value(j) * &inst.c()[j])
            .sum();
        match groups.get(&dropped) {
            Some((c, _)) if *c <= loser_cost => {}
            _ => {
                groups.insert(dropped, (loser_cost, x.clone()));
            }
        }
    }
    let alternatives: Vec<Alternative> = groups
        .into_iter()
        .map(|(dropped, (loser_cost, representative))| Alternative {
            dropped,
            loser_cost,
            representative,
        })
        .collect();
    for (t, &j) in winners.iter().enumerate() {
        if !alternatives.iter().any(|a| a.dropped.contains(&t)) {
            return Err(Error::Monopoly {
                column: j,
                label: inst.label(j).to_string(),
                k,
            });
        }
    }

    let mut search = PricingSearch {
        inst,
        winners: winners.clone(),
        alternatives,
        lps: 0,
        seen: HashSet::new(),
        best: None,
    };
    search.branch(&mut Vec::new())?;
    let Some((nu, zw, selected)) = search.best.take() else {
        return Err(Error::Infeasible(format!("min benchmark at k = {k} admits no pricing")));
    };

    let mut z = inst.c().to_vec();
    for (t, &j) in winners.iter().enumerate() {
        z[j] = zw[t].clone();
    }
    let witnesses = (0..inst.n())
        .map(|j| match winners.iter().position(|&w| w == j) {
            None => x_star.clone(),
            Some(t) => selected
                .iter()
                .map(|&s| &search.alternatives[s])
                .find(|a| a.dropped.contains(&t))
                .expect("selection covers every winner")
                .representative
                .clone(),
        })
        .collect();

    Ok(MinBenchResult {
        nu,
        pricing: PricingVector { z },
        x_star,
        witnesses,
        lps: search.lps,
    })
}

/// `nu(k)` straight from the definition: one witness per column (losers
/// included), every binary solution as an explicit constraint, one LP over
/// the full price vector per distinct selection.
pub fn nu_exhaustive(inst: &Instance, k: i64) -> Result<(Scalar, PricingVector)> {
    let x_star = lexmin_optimal(inst, k)?;
    let feasible = enumerate_binary_feasible(inst, k)?;
    let n = inst.n();
    let pools: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..feasible.len()).filter(|&f| feasible[f].value(j).is_zero()).collect())
        .collect();
    if let Some(j) = pools.iter().position(Vec::is_empty) {
        return Err(Error::Monopoly {
            column: j,
            label: inst.label(j).to_string(),
            k,
        });
    }
    let count = pools.iter().fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128));
    if count > SELECTION_CAP {
        return Err(Error::CapExceeded {
            what: "witness selections",
            size: count,
            cap: SELECTION_CAP,
        });
    }

    // z·x* - z·x as a coefficient row
    let gap_row = |x: &SolutionVector| -> Vec<Scalar> {
        (0..n).map(|j| x_star.value(j) - x.value(j)).collect()
    };
    let mut base = LinearProgram::minimize(
        (0..n).map(|j| if x_star.value(j).is_one() { Scalar::one() } else { Scalar::zero() }).collect(),
    );
    for j in 0..n {
        let c = inst.c()[j].clone();
        if x_star.value(j).is_one() {
            base.set_bounds(j, Some(c), None);
        } else {
            base.set_bounds(j, Some(c.clone()), Some(c));
        }
    }
    for x in &feasible {
        base.add_row(gap_row(x), Relation::Le, Scalar::zero());
    }

    let mut best: Option<(Scalar, Vec<Scalar>)> = None;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut odometer = vec![0usize; n];
    loop {
        let mut picked: Vec<usize> = odometer.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
        picked.sort_unstable();
        picked.dedup();
        if seen.insert(picked.clone()) {
            let mut lp = base.clone();
            for &f in &picked {
                lp.add_row(gap_row(&feasible[f]), Relation::Eq, Scalar::zero());
            }
            if let LpOutcome::Optimal(o) = lp.solve()? {
                if best.as_ref().is_none_or(|(b, _)| o.objective < *b) {
                    best = Some((o.objective, o.x));
                }
            }
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == n {
                let (nu, z) = best.ok_or_else(|| Error::Infeasible("no selection admits a pricing".into()))?;
                return Ok((nu, PricingVector { z }));
            }
            odometer[pos] += 1;
            if odometer[pos] < pools[pos].len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

/// Rechecks all three pricing requirements against a full enumeration of `P(k)`.
pub fn verify_pricing(
    inst: &Instance,
    k: i64,
    x_star: &SolutionVector,
    pricing: &PricingVector,
    witnesses: &[SolutionVector],
) -> Result<bool> {
    let z = &pricing.z;
    let n = inst.n();
    if z.len() != n || witnesses.len() != n {
        return Ok(false);
    }
    let c = inst.c();
    let prices_ok = (0..n).all(|j| {
        if x_star.value(j).is_one() {
            z[j] >= c[j]
        } else {
            z[j] == c[j]
        }
    });
    if !prices_ok {
        return Ok(false);
    }
    let price = x_star.dot(z);
    let level = int(k);
    let optimal = enumerate_binary_feasible(inst, k)?.iter().all(|x| price <= x.dot(z));
    let witnessed = witnesses.iter().enumerate().all(|(j, w)| {
        w.is_binary() && inst.is_feasible(w, &level) && w.value(j).is_zero() && w.dot(z) == price
    });
    Ok(optimal && witnessed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundVerdict {
    Holds,
    Violated,
}

/// `nu >= k Gamma_c`
pub fn check_minbench_bound(nu: &Scalar, gamma: &Scalar, k: i64) -> BoundVerdict {
    if *nu >= int(k) * gamma {
        BoundVerdict::Holds
    } else {
        BoundVerdict::Violated
    }
}

#[derive(Clone, Debug)]
pub enum PremiseVerdict {
    /// For each column, an optimal solution of `P(k)` avoiding it.
    Holds(Vec<SolutionVector>),
    Fails { column: usize, reason: String },
}

/// Whether every column can be avoided by some optimal solution of `P(k)`.
pub fn check_shared_optima_premise(inst: &Instance, k: i64) -> Result<PremiseVerdict> {
    let level = int(k);
    let Some(opt) = solve_primal(inst, &level)?.into_optimum() else {
        return Err(Error::Infeasible(format!("P({k}) has no feasible solution")));
    };
    let mut fixings = vec![Fixing::Free; inst.n()];
    let mut witnesses = Vec::with_capacity(inst.n());
    for j in 0..inst.n() {
        fixings[j] = Fixing::Zero;
        let outcome = solve_fixed(inst, &level, &fixings)?;
        fixings[j] = Fixing::Free;
        match outcome {
            None => {
                return Ok(PremiseVerdict::Fails {
                    column: j,
                    reason: format!("every feasible solution of P({k}) uses it"),
                })
            }
            Some((_, v)) if v != opt.objective => {
                return Ok(PremiseVerdict::Fails {
                    column: j,
                    reason: format!("avoiding it costs {v} > phi({k}) = {}", opt.objective),
                })
            }
            Some((x, _)) => {
                if !x.is_binary() {
                    return Err(Error::Internal(format!("restricted vertex {x} is not binary")));
                }
                witnesses.push(x);
            }
        }
    }
    Ok(PremiseVerdict::Holds(witnesses))
}

#[derive(Clone, Debug)]
pub struct SharedOptima {
    pub pieces: Vec<SolutionVector>,
    /// Union of the witness supports.
    pub support: Vec<usize>,
    pub sum: SolutionVector,
    pub phi_one: Scalar,
    pub phi_next: Scalar,
}

/// `k+1` optimal solutions of `P(1)` whose sum is optimal for `P(k+1)`,
/// built from the optimal witnesses of the premise.
pub fn construct_shared_optima(inst: &Instance, k: i64) -> Result<SharedOptima> {
    let witnesses = match check_shared_optima_premise(inst, k)? {
        PremiseVerdict::Holds(w) => w,
        PremiseVerdict::Fails { column, reason } => {
            return Err(Error::PremiseFailed {
                column,
                label: inst.label(column).to_string(),
                reason,
            })
        }
    };
    let mut in_support = vec![false; inst.n()];
    for w in &witnesses {
        for j in w.support() {
            in_support[j] = true;
        }
    }
    let support: Vec<usize> = (0..inst.n()).filter(|&j| in_support[j]).collect();
    let fixings: Vec<Fixing> = in_support
        .iter()
        .map(|&s| if s { Fixing::Free } else { Fixing::Zero })
        .collect();

    let next = int(k + 1);
    let Some((sum, restricted_value)) = solve_fixed(inst, &next, &fixings)? else {
        return Err(Error::Internal(format!("restricted P({}) is infeasible", k + 1)));
    };
    let phi_next = solve_primal(inst, &next)?
        .into_optimum()
        .ok_or_else(|| Error::Internal(format!("P({}) infeasible", k + 1)))?
        .objective;
    if restricted_value != phi_next {
        return Err(Error::Internal(format!(
            "restricted optimum {restricted_value} differs from phi({}) = {phi_next}",
            k + 1
        )));
    }
    if !sum.is_binary() {
        return Err(Error::Internal(format!("restricted vertex {sum} is not binary")));
    }
    let phi_one = solve_primal(inst, &int(1))?
        .into_optimum()
        .ok_or_else(|| Error::Internal("P(1) infeasible".into()))?
        .objective;
    let pieces = decompose(inst, &sum, k + 1)?.pieces;
    if let Some(p) = pieces.iter().find(|p| inst.cost_of(p) != phi_one) {
        return Err(Error::Internal(format!(
            "piece {p} costs {} but phi(1) = {phi_one}",
            inst.cost_of(p)
        )));
    }
    Ok(SharedOptima {
        pieces,
        support,
        sum,
        phi_one,
        phi_next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn collections_on_fixtures() {
        let d1 = enumerate_feasible_collections(&fixtures::d1(), 1).unwrap();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1[0].gamma, int(2));

        let d2 = enumerate_feasible_collections(&fixtures::d2(), 1).unwrap();
        assert_eq!(d2.len(), 3);
        let mut gammas: Vec<Scalar> = d2.iter().map(|c| c.gamma.clone()).collect();
        gammas.sort();
        assert_eq!(gammas, vec![int(6), int(10), int(10)]);

        assert!(enumerate_feasible_collections(&fixtures::d3(), 1).unwrap().is_empty());
    }

    #[test]
    fn gamma_on_fixtures() {
        assert_eq!(gamma_star(&fixtures::d1(), 1).unwrap(), int(2));
        assert_eq!(gamma_star(&fixtures::d2(), 1).unwrap(), int(6));
        assert_eq!(gamma_star(&fixtures::d4(), 2).unwrap(), int(1));
        assert!(matches!(gamma_star(&fixtures::d3(), 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn nu_on_fixtures() {
        let d1 = fixtures::d1();
        let r = nu_bruteforce(&d1, 1).unwrap();
        assert_eq!(r.nu, int(2));
        assert_eq!(r.pricing.z, vec![int(2), int(2)]);
        assert!(verify_pricing(&d1, 1, &r.x_star, &r.pricing, &r.witnesses).unwrap());

        let d2 = fixtures::d2();
        let r = nu_bruteforce(&d2, 1).unwrap();
        assert_eq!(r.nu, int(6));
        assert!(verify_pricing(&d2, 1, &r.x_star, &r.pricing, &r.witnesses).unwrap());

        let d4 = fixtures::d4();
        let r = nu_bruteforce(&d4, 2).unwrap();
        assert_eq!(r.nu, int(2));
        assert_eq!(r.pricing.z, vec![int(1), int(1), int(1)]);

        assert!(matches!(nu_bruteforce(&fixtures::d3(), 1), Err(Error::Monopoly { column: 0, .. })));
    }

    #[test]
    fn grouped_search_matches_definition() {
        for (inst, k) in [(fixtures::d1(), 1), (fixtures::d2(), 1), (fixtures::d4(), 2), (fixtures::d4(), 1)] {
            let fast = nu_bruteforce(&inst, k).unwrap();
            let (slow, z) = nu_exhaustive(&inst, k).unwrap();
            assert_eq!(fast.nu, slow);
            assert_eq!(z.z.len(), inst.n());
        }
    }

    #[test]
    fn verify_pricing_rejects_bad_prices() {
        let d2 = fixtures::d2();
        let r = nu_bruteforce(&d2, 1).unwrap();
        let mut low = r.pricing.clone();
        low.z[0] = int(0);
        assert!(!verify_pricing(&d2, 1, &r.x_star, &low, &r.witnesses).unwrap());
        // raising a winner past its witness breaks optimality of x*
        let mut high = r.pricing.clone();
        high.z[0] = &high.z[0] + int(5);
        assert!(!verify_pricing(&d2, 1, &r.x_star, &high, &r.witnesses).unwrap());
    }

    #[test]
    fn bound_checks() {
        assert_eq!(check_minbench_bound(&int(2), &int(2), 1), BoundVerdict::Holds);
        assert_eq!(check_minbench_bound(&int(6), &int(6), 1), BoundVerdict::Holds);
        assert_eq!(check_minbench_bound(&int(1), &int(2), 1), BoundVerdict::Violated);
    }

    #[test]
    fn shared_optima() {
        let d4 = fixtures::d4();
        let s = construct_shared_optima(&d4, 2).unwrap();
        assert_eq!(s.pieces.len(), 3);
        assert!(s.pieces.iter().all(|p| d4.cost_of(p) == int(1)));
        assert_eq!(s.phi_next, int(3) * &s.phi_one);

        match construct_shared_optima(&fixtures::d1(), 1) {
            Err(Error::PremiseFailed { column, .. }) => assert_eq!(column, 0),
            other => panic!("{other:?}"),
        }

        let free = fixtures::d2().with_costs(vec![int(0); 5]).unwrap();
        let s = construct_shared_optima(&free, 1).unwrap();
        assert_eq!(s.pieces.len(), 2);
        assert!(s.pieces.iter().all(|p| free.cost_of(p) == int(0)));
    }
}
