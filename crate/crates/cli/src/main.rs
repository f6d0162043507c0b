use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use matchpoly_cli::commands::{self, CmdError, DistanceArgs, ExperimentArgs};

/// Matching-polytope skeleton toolbox: instance generation, reduction
/// bundles, flip-distance oracles, long-cycle recovery, and pivot-rule
/// experiments.
#[derive(Parser)]
#[command(name = "matchpoly", version, about)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random Hamiltonian digraph with a planted cycle.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        n: usize,
        /// Chord probability, as a decimal-free rational like `3/10`.
        #[arg(long, default_value = "3/10")]
        p: String,
        /// Directory for digraph.txt and ham.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the reduction bundle for a digraph file.
    Reduce {
        #[arg(long)]
        digraph: PathBuf,
        /// Hamiltonian cycle file; improves witness slot placement.
        #[arg(long)]
        ham: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact flip distance between two matchings (BFS oracle).
    Distance {
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        m1: Option<PathBuf>,
        #[arg(long)]
        m2: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        oracle_cap: usize,
    },
    /// Recover a long directed cycle of the initial orientation from a trace.
    Recover {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        ell: usize,
        /// Directed cycle of the final orientation; defaults to the longest
        /// one found by bounded enumeration.
        #[arg(long)]
        cycle: Option<PathBuf>,
    },
    /// Build monotone witness weights for a bundle.
    Weights {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one pivot rule from M1 on a bundle.
    Pivot {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Weight file; defaults to the bundle's monotone witness weights.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Re-derive every invariant of a bundle (and optional trace).
    Verify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Also run the BFS distance oracle under this cap.
        #[arg(long)]
        oracle_cap: Option<usize>,
    },
    /// Sweep seeds and pivot rules, emitting an experiment report.
    Experiment {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "3/10")]
        p: String,
        /// Pivot rule id; repeat for several. Defaults to all rules.
        #[arg(long = "rule")]
        rules: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[arg(long, default_value_t = 200_000)]
        oracle_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn render_human(value: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}{k}:");
                        render_human(v, indent + 1);
                    }
                    _ => println!("{pad}{k}: {v}"),
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match v {
                    Value::Object(_) | Value::Array(_) => {
                        println!("{pad}-");
                        render_human(v, indent + 1);
                    }
                    _ => println!("{pad}- {v}"),
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate { seed, n, p, out } => {
            commands::cmd_generate(*seed, *n, p, out.as_deref())
        }
        Command::Reduce { digraph, ham, out } => {
            commands::cmd_reduce(digraph, ham.as_deref(), out.as_deref())
        }
        Command::Distance {
            bundle,
            graph,
            m1,
            m2,
            oracle_cap,
        } => commands::cmd_distance(DistanceArgs {
            bundle: bundle.as_deref(),
            graph: graph.as_deref(),
            m1: m1.as_deref(),
            m2: m2.as_deref(),
            oracle_cap: *oracle_cap,
        }),
        Command::Recover { trace, ell, cycle } => {
            commands::cmd_recover(trace, *ell, cycle.as_deref())
        }
        Command::Weights { bundle, out } => commands::cmd_weights(bundle, out.as_deref()),
        Command::Pivot {
            bundle,
            rule,
            cap,
            weights,
        } => commands::cmd_pivot(bundle, rule, *cap, weights.as_deref()),
        Command::Verify {
            bundle,
            trace,
            oracle_cap,
        } => commands::cmd_verify(bundle, trace.as_deref(), *oracle_cap),
        Command::Experiment {
            seed,
            runs,
            n,
            p,
            rules,
            cap,
            oracle_cap,
            out,
        } => commands::cmd_experiment(ExperimentArgs {
            seed: *seed,
            runs: *runs,
            n: *n,
            p,
            rules: rules.clone(),
            cap: *cap,
            oracle_cap: *oracle_cap,
            out: out.as_ref(),
        }),
    };

    match result {
        Ok(value) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                render_human(&value, 0);
            }
            ExitCode::SUCCESS
        }
        Err(CmdError::Verification(value)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                render_human(&value, 0);
            }
            ExitCode::from(1)
        }
        Err(CmdError::Failed(message)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({"error": message})).unwrap()
                );
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(1)
        }
        Err(CmdError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
    }
}
