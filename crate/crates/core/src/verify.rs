//! One-shot verification of every identity and bound on a single instance.

use crate::benchmark_max::{check_sandwich, mu_via_phi, pruned_benchmark, solve_bmax, SandwichVerdict};
use crate::benchmark_min::{
    check_minbench_bound, check_shared_optima_premise, construct_shared_optima, gamma_star, nu_bruteforce,
    verify_pricing, BoundVerdict, PremiseVerdict, WINNER_CAP,
};
use crate::decompose::{decompose, verify_decomposition};
use crate::error::{Error, Result};
use crate::instance::{check_monopoly_free, Instance, MonopolyVerdict};
use crate::parametric::{compute_phi, PhiFunction};
use crate::report::{scalar_list, support_labels, Check, ReportWriter};
use crate::scalar::{format_scalar, int, ratio};
use crate::solver::{lexmin_optimal, solve_primal, verify_optimality, ENUMERATION_CAP};
use crate::unimodular::{check_totally_unimodular, TuVerdict, DEFAULT_SIZE_LIMIT};

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub text: String,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

pub fn verify_instance(inst: &Instance, name: &str, kmax: i64) -> Result<VerifyReport> {
    let mut w = ReportWriter::new();
    w.kv("instance", name);
    w.kv("rows", inst.m());
    w.kv("columns", inst.n());
    w.kv(
        "tu",
        match check_totally_unimodular(inst, DEFAULT_SIZE_LIMIT) {
            TuVerdict::Confirmed { max_order, .. } => format!("confirmed up to order {max_order}"),
            TuVerdict::Refuted { determinant, .. } => format!("refuted (determinant {determinant})"),
            TuVerdict::Skipped { .. } => "skipped (size)".to_string(),
        },
    );

    let phi = compute_phi(inst)?;
    phi_section(&mut w, inst, &phi)?;

    for k in 1..=kmax {
        w.open(format!("k={k}"));
        level_section(&mut w, inst, &phi, k)?;
        w.close();
    }

    let failed = w.failures();
    let total = w.checks().len();
    w.open("summary");
    w.kv("checks", total);
    w.kv("failed", failed);
    w.kv("status", if failed == 0 { "pass" } else { "FAIL" });
    w.close();
    let (text, checks) = w.finish();
    Ok(VerifyReport { text, checks })
}

fn phi_section(w: &mut ReportWriter, inst: &Instance, phi: &PhiFunction) -> Result<()> {
    w.open("phi");
    let (lo, hi) = phi.feasible_range();
    w.kv("range", format!("[{lo}, {hi}]"));
    w.kv("grid", scalar_list(phi.grid()));
    w.kv(
        "breakpoints",
        phi.breakpoints().iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
    );
    w.kv("slopes", scalar_list(&phi.slopes()));
    w.check("convex", phi.is_convex());
    w.check("continuous", phi.is_continuous());

    // Between consecutive integers phi must be exactly linear, which is what
    // integral breakpoints mean.
    let mut between = true;
    for k in 0..hi {
        for lambda in [int(k) + ratio(1, 3), int(k) + ratio(1, 2)] {
            let direct = solve_primal(inst, &lambda)?
                .into_optimum()
                .ok_or_else(|| Error::Internal(format!("P({}) infeasible inside range", format_scalar(&lambda))))?;
            between &= direct.objective == phi.eval(&lambda)?;
        }
    }
    w.check("integer_breakpoints", between);

    let mut certified = true;
    let mut integral = true;
    for k in lo..=hi {
        let level = int(k);
        if let Some(o) = solve_primal(inst, &level)?.into_optimum() {
            certified &= verify_optimality(inst, &level, &o.x, &o.certificate);
            integral &= o.x.is_binary();
        } else {
            certified = false;
        }
    }
    w.check("certificates", certified);
    w.check("vertex_integrality", integral);
    w.close();
    Ok(())
}

fn level_section(w: &mut ReportWriter, inst: &Instance, phi: &PhiFunction, k: i64) -> Result<()> {
    let (_, hi) = phi.feasible_range();
    if k > hi {
        w.kv("status", "infeasible");
        return Ok(());
    }
    let phi_k = phi.at_integer(k).expect("in range").clone();
    w.scalar("phi", &phi_k);

    let x_star = lexmin_optimal(inst, k)?;
    w.kv("x_star", support_labels(inst, &x_star));
    let d = decompose(inst, &x_star, k)?;
    w.check("decomposition", verify_decomposition(inst, &x_star, &d) && d.pieces.len() == k as usize);

    let monopoly = check_monopoly_free(inst, k)?;
    match &monopoly {
        MonopolyVerdict::Free(_) => {
            w.kv("monopoly", "none");
            w.check("next_level_feasible", solve_primal(inst, &int(k + 1))?.is_feasible());
        }
        MonopolyVerdict::Monopoly(j) => {
            w.kv("monopoly", inst.label(*j));
            w.kv("benchmarks", format!("skipped: column {} is in every feasible solution", inst.label(*j)));
            return Ok(());
        }
    }

    max_section(w, inst, phi, k)?;
    min_section(w, inst, k)?;
    shared_section(w, inst, phi, k)?;
    Ok(())
}

fn max_section(w: &mut ReportWriter, inst: &Instance, phi: &PhiFunction, k: i64) -> Result<()> {
    w.open("max");
    let bench = solve_bmax(inst, k)?;
    let mu_phi = mu_via_phi(phi, k)?;
    w.scalar("mu", &bench.mu);
    w.scalar("mu_phi", &mu_phi);
    w.kv("z", scalar_list(&bench.z));
    w.kv("y", scalar_list(&bench.y));
    w.check("mu_identity", bench.mu == mu_phi);
    w.check("constraints", bench.is_feasible_for(inst));
    w.check("tight_prices", bench.prices_are_tight(inst));

    let pb = pruned_benchmark(inst, k)?;
    let mu_tilde = pb.mu_tilde().clone();
    w.kv("pruned_columns", pb.pruned.instance.labels().join(" "));
    w.scalar("mu_tilde", &mu_tilde);
    w.scalar("mu_tilde_phi", &pb.mu_tilde_via_phi);
    w.check("pruned_mu_identity", mu_tilde == pb.mu_tilde_via_phi);
    let phi_k = phi.at_integer(k).expect("in range");
    let phi_next = phi.at_integer(k + 1).expect("monopoly-free");
    let pruned_k = pb.phi.at_integer(k).expect("pruned P(k) feasible");
    let pruned_next = pb.phi.at_integer(k + 1).expect("pruned P(k+1) feasible");
    w.check("pruned_next_level", pruned_next == phi_next);
    w.check("pruned_restriction", phi_k <= pruned_k);
    w.check(
        "sandwich",
        check_sandwich(&bench.mu, &mu_tilde, k) == SandwichVerdict::Holds,
    );

    let split = decompose(inst, &pb.pruned.xbar, k + 1)?;
    let k_delta = int(k) * &split.delta;
    let mean = int(k) * phi_next / int(k + 1);
    w.scalar("delta", &split.delta);
    w.check("decomposition_next", verify_decomposition(inst, &pb.pruned.xbar, &split));
    w.check("chain_mu_tilde_ge_k_delta", mu_tilde >= k_delta);
    w.check("chain_k_delta_ge_mean", k_delta >= mean);
    w.check("chain_mean_ge_mu_share", mean >= &bench.mu / int(k + 1));
    w.close();
    Ok(())
}

fn min_section(w: &mut ReportWriter, inst: &Instance, k: i64) -> Result<()> {
    w.open("min");
    if inst.n() > ENUMERATION_CAP {
        w.kv("skipped", format!("{} columns exceed the enumeration cap {ENUMERATION_CAP}", inst.n()));
        w.close();
        return Ok(());
    }
    let nu = match nu_bruteforce(inst, k) {
        Ok(nu) => nu,
        Err(Error::CapExceeded { what, size, cap }) => {
            w.kv("skipped", format!("{what}: {size} exceeds cap {cap} (winner cap {WINNER_CAP})"));
            w.close();
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    let gamma = gamma_star(inst, k)?;
    w.scalar("nu", &nu.nu);
    w.kv("z", scalar_list(&nu.pricing.z));
    w.scalar("gamma", &gamma);
    w.check(
        "pricing_requirements",
        verify_pricing(inst, k, &nu.x_star, &nu.pricing, &nu.witnesses)?,
    );
    w.check("nu_lower_bound", check_minbench_bound(&nu.nu, &gamma, k) == BoundVerdict::Holds);
    w.close();
    Ok(())
}

fn shared_section(w: &mut ReportWriter, inst: &Instance, phi: &PhiFunction, k: i64) -> Result<()> {
    w.open("shared_optima");
    match check_shared_optima_premise(inst, k)? {
        PremiseVerdict::Fails { column, reason } => {
            w.kv("premise", format!("fails at {}: {reason}", inst.label(column)));
        }
        PremiseVerdict::Holds(_) => {
            w.kv("premise", "holds");
            let shared = construct_shared_optima(inst, k)?;
            let phi_one = phi.at_integer(1).expect("k >= 1 feasible").clone();
            let phi_next = phi.at_integer(k + 1).expect("premise implies P(k+1) feasible").clone();
            w.kv(
                "pieces",
                shared
                    .pieces
                    .iter()
                    .map(|p| format!("[{}]", support_labels(inst, p)))
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            w.check("piece_count", shared.pieces.len() == (k + 1) as usize);
            w.check("pieces_optimal", shared.pieces.iter().all(|p| inst.cost_of(p) == phi_one));
            w.check("sum_optimal", inst.cost_of(&shared.sum) == phi_next);
            w.check("linear_value", phi_next == int(k + 1) * &phi_one);
            w.check("linear_phi", phi.is_linear_on(k + 1));
        }
    }
    w.close();
    Ok(())
}
