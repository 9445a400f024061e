use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use formicode::cli::{
    cmd_export, cmd_fit, cmd_plotdata, cmd_replicate, cmd_simulate, CliError, FitSource, PlotKind,
    PlotSource, Series, SimulateArgs, SEED_ENV_VAR,
};

#[derive(Parser)]
#[command(
    name = "formicode",
    version,
    about = "Simulate and analyse scout-to-forager message transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON-configured experiment; writes trials.csv, summary.json, manifest.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed and FORMICODE_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Recompute published values from the embedded tables.
    Replicate {
        /// all, routes_126, table2_ordering, binomial_152_117, table3_fit, table5_correlation
        #[arg(conflicts_with = "table")]
        selector: Option<String>,
        #[arg(long)]
        table: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Least-squares fit of one column on another.
    Fit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// x is a code length in bits; also report bits per minute.
        #[arg(long)]
        bits: bool,
        #[arg(long)]
        json: bool,
    },
    /// Emit plot-ready series.
    Plotdata {
        #[command(flatten)]
        source: Source,
        /// time_vs_index, time_vs_distance or complexity_vs_time
        #[arg(long)]
        kind: String,
        #[arg(long, value_delimiter = ',')]
        anchors: Vec<u32>,
        /// Directory for <kind>.dat and manifest.json; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write embedded tables as CSV.
    Export {
        #[arg(long, default_value = "all")]
        table: String,
        #[arg(long, default_value = "tables")]
        out: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV file (trials.csv for plotdata).
    csv: Option<PathBuf>,
    /// Embedded table instead of a file, e.g. table3.
    #[arg(long)]
    table: Option<String>,
}

fn number(v: f64) -> String {
    if v != 0.0 && !(1e-3..1e6).contains(&v.abs()) {
        format!("{v:.4e}")
    } else {
        format!("{v:.6}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            config,
            seed,
            out,
            json,
        } => {
            let outcome = cmd_simulate(&SimulateArgs {
                config,
                seed,
                env_seed: std::env::var(SEED_ENV_VAR).ok(),
                out: out.clone(),
            })?;
            if json {
                println!("{}", json_line(&outcome));
            } else {
                println!(
                    "{} trials, seed {}, written to {}",
                    outcome.trials,
                    outcome.seed,
                    out.display()
                );
                for s in &outcome.stages {
                    println!(
                        "stage {}: mean contact {:.2} s, success {:.3}, mean search {:.1} s",
                        s.stage, s.mean_contact_s, s.success_rate, s.mean_search_time_s
                    );
                }
            }
        }
        Command::Replicate {
            selector,
            table,
            out,
            json,
        } => {
            let selector = selector.or(table).unwrap_or_else(|| "all".into());
            let report = cmd_replicate(&selector, out.as_deref())?;
            if json {
                println!("{}", json_line(&report));
            } else {
                for c in &report.checks {
                    println!(
                        "[{}] {}: {}: recomputed {} (published {}, tolerance {})",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.selector,
                        c.quantity,
                        c.recomputed_exact
                            .clone()
                            .unwrap_or_else(|| number(c.recomputed)),
                        c.published_value,
                        c.tolerance
                    );
                }
            }
        }
        Command::Fit {
            source,
            x,
            y,
            bits,
            json,
        } => {
            let source = match (source.csv, source.table) {
                (Some(path), _) => FitSource::Csv(path),
                (None, Some(t)) => FitSource::Table(t),
                (None, None) => unreachable!("clap requires a source"),
            };
            let outcome = cmd_fit(&source, &x, &y, bits)?;
            if json {
                for w in &outcome.warnings {
                    eprintln!("warning: {w}");
                }
                println!("{}", json_line(&outcome));
            } else {
                print!("{}", outcome.render());
            }
        }
        Command::Plotdata {
            source,
            kind,
            anchors,
            out,
        } => {
            let source = match (source.csv, source.table) {
                (Some(path), _) => PlotSource::Trials(path),
                (None, Some(t)) => PlotSource::Table(t),
                (None, None) => unreachable!("clap requires a source"),
            };
            let kind: PlotKind = kind.parse()?;
            let series = cmd_plotdata(&source, kind, &anchors, out.as_deref())?;
            if out.is_none() {
                print!("{}", Series::render_all(&series));
            }
        }
        Command::Export { table, out } => {
            for path in cmd_export(&table, &out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(e.code).unwrap_or(1))
        }
    }
}
