use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mfcontrol::scenario::{load_scenario, run_all, run_to_dir, summary_table, to_toml, Registry};
use mfcontrol::ScenarioError;

#[derive(Parser)]
#[command(name = "mfcontrol", version, about = "Model-free control simulation lab")]
struct Cli {
    /// Extra directory of scenario files added to the built-in registry.
    #[arg(long, global = true, env = "MFCONTROL_SCENARIOS")]
    scenarios: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered scenarios.
    List,
    /// Run a scenario by name or file path, or the whole registry.
    Run {
        /// Scenario name or path to a TOML file.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        scenario: Option<String>,
        /// Output directory.
        #[arg(long, env = "MFCONTROL_OUT", default_value = "mfcontrol-out")]
        out: PathBuf,
        /// Override the noise seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Run every registered scenario and write a summary table.
        #[arg(long)]
        all: bool,
    },
    /// Check a scenario file without running it.
    Validate {
        path: PathBuf,
        /// Print the normalized scenario with all defaults filled in.
        #[arg(long)]
        print: bool,
    },
}

fn registry(dir: Option<&Path>) -> Result<Registry, ScenarioError> {
    match dir {
        Some(d) => Registry::with_custom_dir(d),
        None => Registry::builtin(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode, ScenarioError> {
    match cli.command {
        Command::List => {
            print!("{}", registry(cli.scenarios.as_deref())?.listing());
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { path, print } => {
            let spec = load_scenario(&path)?;
            println!("{}: ok ({} / {})", spec.name, spec.plant.name(), spec.controller.name());
            if print {
                print!("{}", to_toml(&spec));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            scenario,
            out,
            seed,
            all,
        } => {
            let reg = registry(cli.scenarios.as_deref())?;
            let specs = if all {
                reg.specs()
            } else {
                let name = scenario.expect("clap enforces a scenario unless --all");
                vec![reg.resolve(&name)?]
            };
            let specs: Vec<_> = specs
                .into_iter()
                .map(|s| match seed {
                    Some(seed) => s.with_seed(seed),
                    None => s,
                })
                .collect();

            let results = if all {
                run_all(&specs, &out)
            } else {
                vec![(specs[0].name.clone(), run_to_dir(&specs[0], &out))]
            };
            for (name, r) in &results {
                match r {
                    Ok(s) => {
                        for f in &s.files {
                            println!("{name}: wrote {}", f.display());
                        }
                    }
                    Err((e, files)) => {
                        eprintln!("{name}: {e}");
                        for f in files {
                            eprintln!("{name}: wrote partial {}", f.display());
                        }
                    }
                }
            }
            if all {
                let table = summary_table(&results);
                print!("{table}");
                let path = out.join("summary.txt");
                std::fs::write(&path, &table).map_err(|source| ScenarioError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            Ok(if results.iter().all(|(_, r)| r.is_ok()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
