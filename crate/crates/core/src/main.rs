use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tu_auction::benchmark_max::{check_sandwich, mu_via_phi, pruned_benchmark, solve_bmax, SandwichVerdict};
use tu_auction::benchmark_min::{
    check_minbench_bound, gamma_star_with_collection, nu_bruteforce, verify_pricing, BoundVerdict,
};
use tu_auction::decompose::{decompose, verify_decomposition};
use tu_auction::format::{load_any, save_instance, save_kflow};
use tu_auction::generate::{random_kflow, RandomSpec};
use tu_auction::instance::{check_monopoly_free, kflow_instance, Instance, MonopolyVerdict};
use tu_auction::parametric::compute_phi;
use tu_auction::report::{scalar_list, support_labels, ReportWriter};
use tu_auction::scalar::int;
use tu_auction::solver::{lexmin_optimal, solve_primal, verify_optimality, DualCertificate, SolveResult};
use tu_auction::unimodular::{check_totally_unimodular, TuVerdict, DEFAULT_SIZE_LIMIT};
use tu_auction::verify::verify_instance;
use tu_auction::{fixtures, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_STATUS: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser)]
#[command(name = "tu-auction", version, about = "Exact set-system auction benchmarks over TU systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArg {
    /// TU-AUCTION v1 or KFLOW v1 file
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Solve P(k) and print the lexmin optimum with its dual certificate
    Solve {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        k: i64,
    },
    /// Print the value function phi(lambda)
    Phi {
        #[command(flatten)]
        input: InstanceArg,
    },
    /// Split the lexmin optimum of P(k) into k unit solutions
    Decompose {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        k: i64,
    },
    /// Max or min benchmark
    Bench {
        #[command(subcommand)]
        which: BenchCommand,
    },
    /// Run every check for k = 1..kmax
    Verify {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, default_value_t = 1)]
        kmax: i64,
    },
    /// Emit a preset or seeded random instance
    Gen(GenArgs),
    /// Structural checks
    Check {
        #[command(subcommand)]
        which: CheckCommand,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    Max {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        k: i64,
        /// Also report the pruned benchmark
        #[arg(long)]
        pruned: bool,
    },
    Min {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    Tu {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long, default_value_t = DEFAULT_SIZE_LIMIT)]
        size_limit: usize,
    },
    Monopoly {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        k: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Tua,
    Kflow,
}

#[derive(Args)]
struct GenArgs {
    /// d1, d2, d3 or d4
    #[arg(long, conflicts_with = "random")]
    preset: Option<String>,
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 6)]
    nodes: usize,
    #[arg(long, default_value_t = 10)]
    edges: usize,
    /// Number of disjoint backbone chains from s to t
    #[arg(long, default_value_t = 2)]
    width: usize,
    #[arg(long, default_value_t = 10)]
    cost_bound: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tua)]
    format: OutputFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Status(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) | Error::Unbounded(_) | Error::Monopoly { .. } | Error::PremiseFailed { .. } => {
                Failure::Status(e.to_string())
            }
            Error::Internal(_) => Failure::Check(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(String, bool), Failure>;

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    load_any(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn instance_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn cmd_solve(path: &Path, k: i64) -> Outcome {
    let inst = load(path)?;
    let level = int(k);
    let opt = match solve_primal(&inst, &level)? {
        SolveResult::Optimal(o) => o,
        SolveResult::Infeasible => return Err(Failure::Status(format!("P({k}) is infeasible"))),
    };
    let x_star = lexmin_optimal(&inst, k)?;
    let cert = DualCertificate::for_solution(opt.certificate.y.clone(), &x_star);
    let certified = verify_optimality(&inst, &level, &x_star, &cert);

    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    w.kv("k", k);
    w.kv("status", "optimal");
    w.scalar("phi", &opt.objective);
    w.kv("x_star", support_labels(&inst, &x_star));
    w.kv("x", scalar_list(x_star.values()));
    w.open("certificate");
    w.kv("y", scalar_list(&cert.y));
    let labels = |js: &[usize]| {
        if js.is_empty() {
            "-".to_string()
        } else {
            js.iter().map(|&j| inst.label(j)).collect::<Vec<_>>().join(" ")
        }
    };
    w.kv("zero", labels(&cert.zero));
    w.kv("fractional", labels(&cert.fractional));
    w.kv("one", labels(&cert.one));
    let ok = w.check("optimality", certified);
    w.close();
    Ok((w.finish().0, ok))
}

fn cmd_phi(path: &Path) -> Outcome {
    let inst = load(path)?;
    let phi = compute_phi(&inst)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    let (lo, hi) = phi.feasible_range();
    w.kv("range", format!("[{lo}, {hi}]"));
    w.kv("grid", scalar_list(phi.grid()));
    for (i, s) in phi.segments().iter().enumerate() {
        w.open(format!("segment {}", i + 1));
        w.kv("interval", format!("[{}, {}]", s.start, s.end));
        w.scalar("intercept", &s.intercept);
        w.scalar("slope", &s.slope);
        w.close();
    }
    let ok = w.check("convex", phi.is_convex()) & w.check("continuous", phi.is_continuous());
    Ok((w.finish().0, ok))
}

fn cmd_decompose(path: &Path, k: i64) -> Outcome {
    let inst = load(path)?;
    let x_star = lexmin_optimal(&inst, k)?;
    let d = decompose(&inst, &x_star, k)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    w.kv("k", k);
    w.kv("x_star", support_labels(&inst, &x_star));
    for (i, p) in d.pieces.iter().enumerate() {
        w.open(format!("piece {}", i + 1));
        w.kv("columns", support_labels(&inst, p));
        w.scalar("cost", &inst.cost_of(p));
        w.close();
    }
    w.scalar("delta", &d.delta);
    let ok = w.check("decomposition", verify_decomposition(&inst, &x_star, &d));
    Ok((w.finish().0, ok))
}

fn cmd_bench_max(path: &Path, k: i64, pruned: bool) -> Outcome {
    let inst = load(path)?;
    let bench = solve_bmax(&inst, k)?;
    let phi = compute_phi(&inst)?;
    let mu_phi = mu_via_phi(&phi, k)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    w.kv("k", k);
    w.kv("winners", support_labels(&inst, &bench.x_star));
    w.scalar("mu", &bench.mu);
    w.scalar("mu_phi", &mu_phi);
    w.kv("z", scalar_list(&bench.z));
    w.kv("y", scalar_list(&bench.y));
    let mut ok = w.check("mu_identity", bench.mu == mu_phi);
    ok &= w.check("constraints", bench.is_feasible_for(&inst));
    if pruned {
        let pb = pruned_benchmark(&inst, k)?;
        w.open("pruned");
        w.kv("columns", pb.pruned.instance.labels().join(" "));
        w.scalar("mu_tilde", pb.mu_tilde());
        w.scalar("mu_tilde_phi", &pb.mu_tilde_via_phi);
        ok &= w.check("mu_identity", *pb.mu_tilde() == pb.mu_tilde_via_phi);
        ok &= w.check("sandwich", check_sandwich(&bench.mu, pb.mu_tilde(), k) == SandwichVerdict::Holds);
        w.close();
    }
    Ok((w.finish().0, ok))
}

fn cmd_bench_min(path: &Path, k: i64) -> Outcome {
    let inst = load(path)?;
    let nu = nu_bruteforce(&inst, k)?;
    let gamma = gamma_star_with_collection(&inst, k)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    w.kv("k", k);
    w.kv("winners", support_labels(&inst, &nu.x_star));
    w.scalar("nu", &nu.nu);
    w.kv("z", scalar_list(&nu.pricing.z));
    w.open("witnesses");
    for (j, wit) in nu.witnesses.iter().enumerate() {
        w.kv(inst.label(j), support_labels(&inst, wit));
    }
    w.close();
    w.scalar("gamma", &gamma.gamma);
    w.kv(
        "collection",
        gamma
            .members
            .iter()
            .map(|m| format!("[{}]", support_labels(&inst, m)))
            .collect::<Vec<_>>()
            .join(" "),
    );
    let mut ok = w.check("pricing_requirements", verify_pricing(&inst, k, &nu.x_star, &nu.pricing, &nu.witnesses)?);
    ok &= w.check("nu_lower_bound", check_minbench_bound(&nu.nu, &gamma.gamma, k) == BoundVerdict::Holds);
    Ok((w.finish().0, ok))
}

fn cmd_verify(path: &Path, kmax: i64) -> Outcome {
    let inst = load(path)?;
    let report = verify_instance(&inst, &instance_name(path), kmax)?;
    let ok = report.all_pass();
    Ok((report.text, ok))
}

fn cmd_gen(args: &GenArgs) -> Outcome {
    let graph = match (&args.preset, args.random) {
        (Some(name), _) => fixtures::preset(name).ok_or_else(|| Failure::Usage(format!("unknown preset {name:?}")))?,
        (None, true) => random_kflow(&RandomSpec {
            nodes: args.nodes,
            edges: args.edges,
            width: args.width,
            cost_bound: args.cost_bound,
            seed: args.seed,
        })?,
        (None, false) => return Err(Failure::Usage("pass --preset <name> or --random".into())),
    };
    let text = match args.format {
        OutputFormat::Tua => save_instance(&kflow_instance(&graph)),
        OutputFormat::Kflow => save_kflow(&graph),
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok((String::new(), true))
        }
        None => Ok((text, true)),
    }
}

fn cmd_check_tu(path: &Path, size_limit: usize) -> Outcome {
    let inst = load(path)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    let ok = match check_totally_unimodular(&inst, size_limit) {
        TuVerdict::Confirmed { max_order, checked } => {
            w.kv("verdict", "confirmed");
            w.kv("max_order", max_order);
            w.kv("submatrices", checked);
            true
        }
        TuVerdict::Refuted { rows, columns, witness, determinant } => {
            w.kv("verdict", "refuted");
            w.kv("determinant", determinant);
            let cols: Vec<String> = columns
                .iter()
                .map(|&j| if j == inst.n() { "b".to_string() } else { inst.label(j).to_string() })
                .collect();
            w.kv("rows", rows.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" "));
            w.kv("columns", cols.join(" "));
            w.open("witness");
            for row in witness {
                w.kv("row", row.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
            }
            w.close();
            false
        }
        TuVerdict::Skipped { reason } => {
            w.kv("verdict", "skipped");
            w.kv("reason", reason);
            true
        }
    };
    Ok((w.finish().0, ok))
}

fn cmd_check_monopoly(path: &Path, k: i64) -> Outcome {
    let inst = load(path)?;
    let mut w = ReportWriter::new();
    w.kv("instance", instance_name(path));
    w.kv("k", k);
    let ok = match check_monopoly_free(&inst, k)? {
        MonopolyVerdict::Free(witnesses) => {
            w.kv("verdict", "monopoly-free");
            w.open("witnesses");
            for (j, x) in witnesses.iter().enumerate() {
                w.kv(inst.label(j), support_labels(&inst, x));
            }
            w.close();
            w.check("next_level_feasible", solve_primal(&inst, &int(k + 1))?.is_feasible())
        }
        MonopolyVerdict::Monopoly(j) => {
            w.kv("verdict", "monopoly");
            w.kv("column", inst.label(j));
            true
        }
    };
    Ok((w.finish().0, ok))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Solve { input, k } => cmd_solve(&input.instance, *k),
        Command::Phi { input } => cmd_phi(&input.instance),
        Command::Decompose { input, k } => cmd_decompose(&input.instance, *k),
        Command::Bench { which: BenchCommand::Max { input, k, pruned } } => cmd_bench_max(&input.instance, *k, *pruned),
        Command::Bench { which: BenchCommand::Min { input, k } } => cmd_bench_min(&input.instance, *k),
        Command::Verify { input, kmax } => cmd_verify(&input.instance, *kmax),
        Command::Gen(args) => cmd_gen(args),
        Command::Check { which: CheckCommand::Tu { input, size_limit } } => cmd_check_tu(&input.instance, *size_limit),
        Command::Check { which: CheckCommand::Monopoly { input, k } } => cmd_check_monopoly(&input.instance, *k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Status(msg)) => {
            println!("status: {msg}");
            eprintln!("infeasible or unbounded: {msg}");
            ExitCode::from(EXIT_STATUS)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failure: {msg}");
            ExitCode::from(EXIT_CHECK)
        }
    }
}
