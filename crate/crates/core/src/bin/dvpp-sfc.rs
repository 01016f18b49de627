use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dvpp_sfc::output::{emit_outputs, read_csv};
use dvpp_sfc::scenario::builtin_scenarios;
use dvpp_sfc::summary::summarize;
use dvpp_sfc::{Error, Result, SimConfig};

#[derive(Parser)]
#[command(version, about = "Multi-area secondary frequency control simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more configurations (TOML files or built-in scenario names).
    Run {
        #[arg(required = true)]
        configs: Vec<String>,
        /// Integration step override, s.
        #[arg(long)]
        dt: Option<f64>,
        /// Simulated time override, s.
        #[arg(long)]
        duration: Option<f64>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Run the configurations concurrently.
        #[arg(long)]
        sweep: bool,
    },
    /// List or export the built-in scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Print summary statistics of a recorded CSV.
    Summarize {
        csv: PathBuf,
        /// Event times bounding the per-event ACE windows, s.
        #[arg(long, value_delimiter = ',')]
        event_times: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    List,
    Export {
        name: String,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn load(arg: &str, dt: Option<f64>, duration: Option<f64>) -> Result<SimConfig> {
    let mut cfg = if Path::new(arg).exists() {
        SimConfig::load(arg)?
    } else {
        builtin_scenarios().remove(arg).ok_or_else(|| {
            Error::Config(format!("`{arg}` is neither a file nor a built-in scenario"))
        })?
    };
    if let Some(dt) = dt {
        cfg.dt = dt;
    }
    if let Some(d) = duration {
        cfg.duration = d;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_one(cfg: &SimConfig, out_dir: &Path) -> Result<String> {
    let out = dvpp_sfc::run(cfg)?;
    let files = emit_outputs(&out, &cfg.output, out_dir)?;
    let mut report = format!("== {} ({} rows)\n", cfg.name, out.series.len());
    if !out.series.is_empty() {
        report += &summarize(&out.series, &out.event_times).to_string();
    }
    for f in files {
        report += &format!("wrote {}\n", f.display());
    }
    Ok(report)
}

fn run(
    args: &[String],
    dt: Option<f64>,
    duration: Option<f64>,
    out_dir: &Path,
    sweep: bool,
) -> Result<(), Vec<Error>> {
    let configs = args
        .iter()
        .map(|a| load(a, dt, duration))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| vec![e])?;
    let mut names: Vec<&str> = configs.iter().map(|c| c.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(vec![Error::Config(format!(
            "two runs share the name `{}` and would overwrite each other's files",
            w[0]
        ))]);
    }

    let results: Vec<Result<String>> = if sweep {
        std::thread::scope(|s| {
            let handles: Vec<_> = configs
                .iter()
                .map(|c| s.spawn(move || run_one(c, out_dir)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("run thread panicked"))
                .collect()
        })
    } else {
        configs.iter().map(|c| run_one(c, out_dir)).collect()
    };

    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(report) => print!("{report}"),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn dispatch(cli: Cli) -> Result<(), Vec<Error>> {
    match cli.command {
        Command::Run {
            configs,
            dt,
            duration,
            out_dir,
            sweep,
        } => run(&configs, dt, duration, &out_dir, sweep),
        Command::Scenario { action } => match action {
            ScenarioAction::List => {
                for (name, cfg) in builtin_scenarios() {
                    println!("{name:<14} {} events, {} s", cfg.events.len(), cfg.duration);
                }
                Ok(())
            }
            ScenarioAction::Export { name, output } => {
                let cfg = builtin_scenarios().remove(name.as_str()).ok_or_else(|| {
                    vec![Error::Config(format!("unknown built-in scenario `{name}`"))]
                })?;
                match output {
                    Some(path) => cfg.save(path).map_err(|e| vec![e]),
                    None => {
                        print!("{}", cfg.to_toml_string().map_err(|e| vec![e])?);
                        Ok(())
                    }
                }
            }
        },
        Command::Summarize { csv, event_times } => {
            let series = read_csv(&csv).map_err(|e| vec![e])?;
            if series.is_empty() {
                return Err(vec![Error::Format {
                    path: csv,
                    reason: "no data rows".into(),
                }]);
            }
            print!("{}", summarize(&series, &event_times));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(errors) => {
            for e in &errors {
                eprintln!("error: {e}");
            }
            let code = errors.iter().map(Error::exit_code).max().unwrap_or(1);
            ExitCode::from(code as u8)
        }
    }
}
