use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use waldenfels_cli::{config, presets, suite, tasks};

#[derive(Parser)]
#[command(
    name = "waldenfels",
    about = "Numerical laboratory for Waldenfels-type integro-differential operators",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the scenario described by a TOML configuration file.
    Run {
        config: PathBuf,
        /// Dotted-path overrides, e.g. scenario.h=0.005
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run a named verification suite (paper-core, smoke).
    Suite {
        preset: String,
        /// Output directory (default: $WALDENFELS_OUT or ./out)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List bundled presets, registries and suites.
    ListPresets,
    /// Parse and validate a configuration without computing anything.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config: path, set } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let cfg = config::parse_config(&text, &set).map_err(|e| e.to_string())?;
            let reports = tasks::execute(&cfg).map_err(|e| format!("task failure: {e}"))?;
            let failed = reports.iter().filter(|r| !r.passing()).count();
            for r in &reports {
                println!("{:<34} {:?}", r.check, r.verdict);
            }
            if failed > 0 {
                eprintln!(
                    "{failed} check(s) FAILED; reports under {}",
                    cfg.out_dir.display()
                );
                Ok(ExitCode::from(1))
            } else {
                println!(
                    "all {} checks passing; reports under {}",
                    reports.len(),
                    cfg.out_dir.display()
                );
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Suite { preset, out } => {
            let out_dir = out.unwrap_or_else(|| {
                PathBuf::from(std::env::var("WALDENFELS_OUT").unwrap_or_else(|_| "out".into()))
                    .join(&preset)
            });
            let outcomes =
                suite::run_suite(&preset, &out_dir).map_err(|e| format!("suite failure: {e}"))?;
            let mut any_fail = false;
            for o in &outcomes {
                let pass = o.reports.iter().filter(|r| r.passing()).count();
                let verdict = if pass == o.reports.len() {
                    "PASS"
                } else {
                    "FAIL"
                };
                println!(
                    "criterion {:<24} {verdict} ({pass}/{} checks, {:.1}s)",
                    o.name,
                    o.reports.len(),
                    o.elapsed_s
                );
                any_fail |= pass != o.reports.len();
            }
            println!("reports under {}", out_dir.display());
            Ok(if any_fail {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::ListPresets => {
            print!("{}", presets::list_presets());
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config: path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            match config::parse_config(&text, &[]) {
                Ok(cfg) => {
                    println!(
                        "valid: task={}, dim={}, domain={:?}",
                        cfg.task,
                        cfg.operator.dim(),
                        cfg.domain.variant
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e.to_string()),
            }
        }
    }
}
