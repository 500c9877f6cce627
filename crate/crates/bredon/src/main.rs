//! Command-line interface: run scenarios, verify the pullback
//! representation-ring comparison, and inspect the shipped catalog.
//!
//! Exit codes:
//! * `0` — success: everything requested completed and matched.
//! * `2` — invalid input (unknown scenario, malformed file, bad flags).
//! * `3` — an expected-results block did not match the computation, or a
//!   verification sweep found a failing instance.
//! * `4` — a K-theory readout was requested but collapse could not be
//!   established and no `--assume-collapse` was given.
//! * `5` — the degree-wise assembly aborted on a nonvanishing obstruction.
//!
//! When several conditions hold at once the most fundamental wins:
//! `2` over `5` over `4` over `3`.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bredon::chartab::DEFAULT_ORDER_BOUND;
use bredon::pullback_iso::verify_pullback_iso_sweep;
use bredon::scenario::{
    builtin_scenario, builtin_summaries, describe_scenario, render_json, render_text,
    run_scenario, scenario_from_file, RunOptions, Scenario, ScenarioError, ScenarioReport,
    BUILTIN_SCENARIOS,
};

#[derive(Parser)]
#[command(
    name = "bredon",
    about = "Exact equivariant cohomology of finite proper actions, with \
             representation-ring coefficients, product assembly, and K-theory \
             readouts",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario by name or from a JSON file and print its report.
    Run(RunArgs),
    /// Re-verify a structural claim against exhaustively enumerated inputs.
    Verify {
        #[command(subcommand)]
        claim: VerifyClaim,
    },
    /// List what can be run.
    List {
        /// What to list (only "scenarios" is available).
        what: String,
    },
    /// Explain a built-in scenario: its control group, factors, and twists.
    Describe {
        /// Name of a built-in scenario.
        scenario: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario name or path to a scenario JSON file.
    scenario: String,
    /// Use the twisted variant of a built-in scenario.
    #[arg(long)]
    twisted: bool,
    /// Read K-theory even when odd degrees are nonzero, asserting that the
    /// spectral comparison collapses; the justification is recorded in the
    /// report.
    #[arg(long)]
    assume_collapse: bool,
    /// Cross-check the first DEPTH factors against a direct computation on
    /// the honest product structure (default 2; 0 or 1 disables).
    #[arg(long, value_name = "DEPTH", default_value_t = 2)]
    direct_check: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum VerifyClaim {
    /// Check, over all pullbacks of surjections between groups up to the
    /// bound, that restriction maps the representation ring of the product
    /// onto the tensor of the factor rings over the base: relations are
    /// killed, and the comparison is injective and surjective. Prints one
    /// line per instance and a summary; exits 3 if any instance fails.
    PullbackIso {
        /// Largest factor-group order to enumerate.
        #[arg(long, value_name = "N", default_value_t = 8)]
        order_bound: usize,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(&args),
        Command::Verify { claim } => match claim {
            VerifyClaim::PullbackIso { order_bound, format } => {
                verify_command(order_bound, format)
            }
        },
        Command::List { what } => list_command(&what),
        Command::Describe { scenario } => describe_command(&scenario),
    }
}

/// Either a built-in scenario (by name) or one loaded from a file path.
/// Paths are recognized by containing a separator or ending in `.json`,
/// so bare names never hit the filesystem.
fn load_scenario(name: &str, twisted: bool) -> Result<Scenario, ScenarioError> {
    let looks_like_path =
        name.contains(std::path::MAIN_SEPARATOR) || name.contains('/') || name.ends_with(".json");
    if looks_like_path {
        if twisted {
            return Err(ScenarioError::NoTwistedVariant { name: name.to_string() });
        }
        scenario_from_file(Path::new(name))
    } else {
        builtin_scenario(name, twisted)
    }
}

fn run_command(args: &RunArgs) -> ExitCode {
    let scenario = match load_scenario(&args.scenario, args.twisted) {
        Ok(s) => s,
        Err(e) => return invalid_input(&e),
    };
    let opts = RunOptions {
        assume_collapse: args.assume_collapse,
        direct_check_depth: args.direct_check,
        bound: DEFAULT_ORDER_BOUND,
    };
    let report = match run_scenario(&scenario, &opts) {
        Ok(r) => r,
        Err(e) => return invalid_input(&e),
    };
    match args.format {
        Format::Text => print!("{}", render_text(&report)),
        Format::Json => print!("{}", render_json(&report)),
    }
    report_exit_code(&report)
}

/// Grade a finished report. Fold obstructions outrank a missing collapse,
/// which outranks an expected-results mismatch.
fn report_exit_code(report: &ScenarioReport) -> ExitCode {
    if !report.fold.completed {
        return ExitCode::from(5);
    }
    if report.k_theory.is_none() {
        return ExitCode::from(4);
    }
    if let Some(exp) = &report.expected {
        if !exp.pass {
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}

fn verify_command(order_bound: usize, format: Format) -> ExitCode {
    let sweep = match verify_pullback_iso_sweep(order_bound, DEFAULT_ORDER_BOUND) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&sweep).expect("reports serialize infallibly");
            s.push('\n');
            print!("{}", s);
        }
        Format::Text => {
            for i in &sweep.instances {
                println!(
                    "{} {} <- {} -> {}{}: kills relations {}, injective {}, surjective {}",
                    if i.holds { "PASS" } else { "FAIL" },
                    i.p,
                    i.s,
                    i.q,
                    if i.twisted { " (twisted)" } else { "" },
                    i.kills_relations,
                    i.injective,
                    i.surjective,
                );
            }
            println!(
                "{} instances, {} passed, {} failed (factor orders up to {})",
                sweep.instances.len(),
                sweep.instances.len() - sweep.failures(),
                sweep.failures(),
                order_bound,
            );
        }
    }
    if sweep.failures() > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn list_command(what: &str) -> ExitCode {
    if what != "scenarios" {
        eprintln!("error: nothing to list for '{}'; try 'list scenarios'", what);
        return ExitCode::from(2);
    }
    for (name, summary) in builtin_summaries() {
        println!("{} — {}", name, summary);
    }
    ExitCode::SUCCESS
}

fn describe_command(name: &str) -> ExitCode {
    if !BUILTIN_SCENARIOS.contains(&name) {
        return invalid_input(&ScenarioError::UnknownScenario { name: name.to_string() });
    }
    // describe the twisted variant when one exists so the description
    // covers everything the scenario offers
    let scenario = builtin_scenario(name, false).expect("listed scenarios build");
    print!("{}", describe_scenario(&scenario));
    if builtin_scenario(name, true).is_ok() {
        println!("a twisted variant is available via --twisted");
    }
    ExitCode::SUCCESS
}

fn invalid_input(e: &ScenarioError) -> ExitCode {
    eprintln!("error: {}", e);
    ExitCode::from(2)
}
