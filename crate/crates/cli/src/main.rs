//! Command-line front end.
//!
//! Exit codes: 0 success/complete, 2 incomplete or undecided results,
//! 1 numerical or validation errors, 64 usage and configuration errors.

mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use twisted_weyl::cohomology::{compute_h1, decide_cohomologous_z};
use twisted_weyl::conjugacy::Verdict;
use twisted_weyl::int_linalg::smith_normal_form;
use twisted_weyl::verify::run_suite;
use twisted_weyl::{Error, Family};

use report::{decision_doc, h1_report, DecideReport, VerifyReport, ZClassificationDoc};
use scenario::ScenarioConfig;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INCOMPLETE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "twisted-weyl",
    about = "Nonabelian cohomology of compact matrix groups through twisted Weyl group orbits",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct CommonFlags {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the witness tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the decider restart budget.
    #[arg(long)]
    restarts: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute H^1(Z/nZ, G) for the configured scenario.
    ComputeH1 {
        config: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Decide whether configured pairs of elements are cohomologous.
    Decide {
        config: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run a named verification suite (or "all").
    Verify {
        suite: String,
        #[command(flatten)]
        flags: CommonFlags,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful exits.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::from(EXIT_OK);
        }
    };
    let code = match cli.command {
        Command::ComputeH1 { config, flags } => cmd_compute_h1(&config, &flags),
        Command::Decide { config, flags } => cmd_decide(&config, &flags),
        Command::Verify { suite, flags } => cmd_verify(&suite, &flags),
    };
    ExitCode::from(code)
}

fn load_config(path: &PathBuf, flags: &CommonFlags) -> Result<ScenarioConfig, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    let mut cfg: ScenarioConfig = serde_json::from_str(&text).map_err(|e| {
        eprintln!("error: config parse failed: {e}");
        EXIT_USAGE
    })?;
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = flags.tol {
        cfg.tolerances.witness = tol;
    }
    if let Some(restarts) = flags.restarts {
        cfg.search.restarts = restarts;
    }
    Ok(cfg)
}

fn emit_json<T: serde::Serialize>(doc: &T, flags: &CommonFlags) -> Result<(), u8> {
    if let Some(path) = &flags.json {
        let text = serde_json::to_string_pretty(doc).expect("report serialization");
        std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_ERROR
        })?;
    }
    Ok(())
}

fn cmd_compute_h1(path: &PathBuf, flags: &CommonFlags) -> u8 {
    let cfg = match load_config(path, flags) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let scenario = match cfg.build() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let started = Instant::now();
    if cfg.action.integers == Some(true) {
        return cmd_compute_h1_integers(&cfg, &scenario, flags, started);
    }
    let n = cfg.action.cyclic.expect("validated cyclic action");
    let res = match compute_h1(&scenario.sigma, n, &scenario.config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let report = h1_report(&cfg, &res, started.elapsed().as_millis());
    if let Err(code) = emit_json(&report, flags) {
        return code;
    }
    if !flags.quiet {
        println!("group           {}", scenario.group.family.label());
        println!("automorphism    {}", scenario.sigma.kind.label());
        println!("cyclic order    {n}");
        println!("torus rank      {}", report.torus_rank);
        println!("|E_n(T)|        {}", report.torsion_count);
        println!("weyl order      {}", report.weyl_order);
        println!("classes         {}", report.class_count);
        println!("status          {}", report.status);
        for (i, class) in report.classes.iter().enumerate() {
            let coords: Vec<String> = class
                .representative
                .coords
                .iter()
                .map(|q| format!("{}/{}", q.num, q.den))
                .collect();
            println!(
                "  class {i}: representative #{} [{}], {} members, {} witnesses",
                class.representative.index,
                coords.join(", "),
                class.members.len(),
                class.witnesses.len()
            );
        }
        if !report.unresolved.is_empty() {
            println!("unresolved      {:?}", report.unresolved);
        }
    }
    if report.status == "complete" {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    }
}

/// Exact classification of `H¹(ℤ, T^k)` for lattice automorphisms on tori:
/// the quotient `T^k / im(1 - M)` via the Smith normal form of `1 - M`.
fn cmd_compute_h1_integers(
    cfg: &ScenarioConfig,
    scenario: &scenario::Scenario,
    flags: &CommonFlags,
    started: Instant,
) -> u8 {
    if !matches!(scenario.group.family, Family::Torus(_)) {
        eprintln!(
            "error: the integers action enumerates H^1 only for torus groups; use `decide` for pairwise questions"
        );
        return EXIT_USAGE;
    }
    let twisted_weyl::automorphism::Kind::Lattice(m) = &scenario.sigma.kind else {
        eprintln!("error: the integers action requires a lattice automorphism");
        return EXIT_USAGE;
    };
    match scenario.sigma.is_one_semisimple(&scenario.config) {
        Ok(true) => {}
        Ok(false) => {
            eprintln!("error: {}", Error::NotOneSemisimple);
            return EXIT_ERROR;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    }
    let k = scenario.group.ambient_size;
    let mut one_minus = twisted_weyl::int_linalg::IntMat::identity(k);
    for i in 0..k {
        for j in 0..k {
            one_minus[(i, j)] -= m[(i, j)];
        }
    }
    let snf = match smith_normal_form(&one_minus) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let rank = snf.rank();
    let divisors: Vec<i64> = snf.diagonal().into_iter().filter(|&d| d > 1).collect();
    let quotient_dimension = k - rank;
    // Finite exactly when the quotient is zero-dimensional; then the class
    // count is the order of the component group.
    let class_count = if quotient_dimension == 0 {
        divisors.iter().product::<i64>().max(1) as usize
    } else {
        0
    };
    let torus = match twisted_weyl::FixedTorus::maximal(&scenario.sigma, &scenario.config, cfg.seed)
    {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let report = report::H1Report {
        config: cfg.clone(),
        torus_rank: torus.rank,
        torsion_count: 0,
        class_count,
        weyl_order: 0,
        points: Vec::new(),
        classes: Vec::new(),
        certificates: Vec::new(),
        status: "complete".into(),
        unresolved: Vec::new(),
        z_classification: Some(ZClassificationDoc {
            quotient_dimension,
            component_divisors: divisors.clone(),
        }),
        timing_ms: started.elapsed().as_millis(),
        seed: cfg.seed,
    };
    if let Err(code) = emit_json(&report, flags) {
        return code;
    }
    if !flags.quiet {
        println!("group           {}", scenario.group.family.label());
        println!("action          integers (H^1(Z, T) = T / im(1 - M))");
        println!("quotient dim    {quotient_dimension}");
        println!("components      {divisors:?}");
        if quotient_dimension == 0 {
            println!("classes         {class_count}");
        } else {
            println!("classes         a {quotient_dimension}-dimensional family");
        }
    }
    EXIT_OK
}

fn cmd_decide(path: &PathBuf, flags: &CommonFlags) -> u8 {
    let cfg = match load_config(path, flags) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let scenario = match cfg.build() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let pairs = match cfg.pair_elements(&scenario.group) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    if pairs.is_empty() {
        eprintln!("error: decide requires a nonempty `pairs` list");
        return EXIT_USAGE;
    }
    let started = Instant::now();
    let mut decisions = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let d = match decide_cohomologous_z(&scenario.sigma, a, b, &scenario.config) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
        };
        decisions.push((i, d));
    }
    let undecided = decisions
        .iter()
        .filter(|(_, d)| d.verdict == Verdict::Undecided)
        .count();
    let report = DecideReport {
        config: cfg.clone(),
        decisions: decisions.iter().map(|(i, d)| decision_doc(*i, d)).collect(),
        undecided_count: undecided,
        timing_ms: started.elapsed().as_millis(),
        seed: cfg.seed,
    };
    if let Err(code) = emit_json(&report, flags) {
        return code;
    }
    if !flags.quiet {
        for doc in &report.decisions {
            println!(
                "pair {}: {} (residual {:.3e}, restarts {})",
                doc.pair, doc.verdict, doc.best_residual, doc.restarts_used
            );
        }
    }
    if undecided == 0 {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    }
}

fn cmd_verify(suite: &str, flags: &CommonFlags) -> u8 {
    let mut config = twisted_weyl::Config::default();
    if let Some(seed) = flags.seed {
        config.seed = seed;
    }
    if let Some(tol) = flags.tol {
        config.tolerances.witness = tol;
    }
    if let Some(restarts) = flags.restarts {
        config.search.restarts = restarts;
    }
    let started = Instant::now();
    let checks = match run_suite(suite, &config) {
        Ok(c) => c,
        Err(Error::UnknownSuite(name)) => {
            eprintln!(
                "error: unknown suite `{name}`; available: {}",
                twisted_weyl::verify::suite_names().join(", ")
            );
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        suite: suite.into(),
        seed: config.seed,
        passed,
        checks,
        timing_ms: started.elapsed().as_millis(),
    };
    if let Err(code) = emit_json(&report, flags) {
        return code;
    }
    if !flags.quiet {
        for check in &report.checks {
            println!(
                "{} {:<24} {}",
                if check.passed { "PASS" } else { "FAIL" },
                check.check_name,
                check.inputs
            );
            if !check.passed {
                for d in &check.details {
                    println!("     {d}");
                }
            }
        }
        println!(
            "{}: {}/{} checks passed in {} ms",
            report.suite,
            report.checks.iter().filter(|c| c.passed).count(),
            report.checks.len(),
            report.timing_ms
        );
    }
    if passed {
        EXIT_OK
    } else {
        EXIT_ERROR
    }
}
