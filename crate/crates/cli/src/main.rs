use std::process::ExitCode;

use chaoslab_cli::config::template;
use chaoslab_cli::experiments::param_specs;
use chaoslab_cli::{exit, registry, resolve, run_and_write, CliError};
use chaoslab_core::algebra::identities::run_default_identity_suite;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chaoslab", version, about = "Reproducible numerical experiments on Wiener chaos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment: `run <name> --seed N [--config FILE] [--workers N] [--out DIR] [--<param> VALUE]..`
    Run {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "ARGS")]
        args: Vec<String>,
    },
    /// List experiments, sorted by name.
    List {
        /// Machine-readable JSON instead of tab-separated lines.
        #[arg(long)]
        json: bool,
    },
    /// Print a config template for an experiment.
    Describe { name: String },
    /// Run the randomized identity suite.
    VerifyIdentities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn run(args: &[String]) -> Result<i32, CliError> {
    let (name, rest) = match args.split_first() {
        Some((first, rest)) if !first.starts_with("--") => (Some(first.as_str()), rest),
        _ => (None, args),
    };
    let config = resolve(name, rest, param_specs)?;
    let (outcome, dir) = run_and_write(&config)?;
    for m in &outcome.metrics {
        println!("{}\t{}\t{:e}", if m.pass { "PASS" } else { "FAIL" }, m.name, m.value);
    }
    println!("wrote {}", dir.display());
    Ok(if outcome.all_pass() { exit::OK } else { exit::CHECK_FAILED })
}

fn list(json: bool) {
    if json {
        let items: Vec<serde_json::Value> = registry()
            .iter()
            .map(|e| {
                let params: Vec<serde_json::Value> = e
                    .params
                    .iter()
                    .map(|p| serde_json::json!({ "name": p.name, "kind": format!("{:?}", p.kind), "default": p.default, "doc": p.doc }))
                    .collect();
                serde_json::json!({ "name": e.name, "summary": e.summary, "params": params })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&items).expect("listing serializes"));
    } else {
        for e in registry() {
            println!("{}\t{}", e.name, e.summary);
        }
    }
}

fn describe(name: &str) -> Result<i32, CliError> {
    let e = chaoslab_cli::find(name).ok_or_else(|| CliError::Config(format!("unknown experiment `{name}`")))?;
    print!("{}", template(e.name, e.summary, e.params));
    Ok(exit::OK)
}

fn verify(seed: u64, trials: usize) -> Result<i32, CliError> {
    let results = run_default_identity_suite(seed, trials)?;
    for r in &results {
        println!(
            "{}\t{}\ttrials={}\tmax_residual={:e}\ttol={:e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.trials,
            r.max_residual,
            r.tol
        );
    }
    Ok(if results.iter().all(|r| r.pass) { exit::OK } else { exit::CHECK_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { args } => run(&args),
        Command::List { json } => {
            list(json);
            Ok(exit::OK)
        }
        Command::Describe { name } => describe(&name),
        Command::VerifyIdentities { seed, trials } => verify(seed, trials),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
