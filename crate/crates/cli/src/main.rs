use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use interval_probe_cli::config::ExperimentConfig;
use interval_probe_cli::forms::parse_list;
use interval_probe_cli::preset::{self, PRESETS};
use interval_probe_cli::run::{self, Failure};

const THREADS_VAR: &str = "INTERVAL_PROBE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "interval-probe",
    version,
    about = "Recover an interval length from boundary flux data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a preset or a key = value config file
    Run {
        case: String,
        /// Comma-separated noise levels in percent
        #[arg(long, allow_hyphen_values = true)]
        noise: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        nt: Option<usize>,
    },
    /// Sample the cost over a bracket and refine its local minima
    Scan {
        case: String,
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        bracket: Option<Vec<f64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        nt: Option<usize>,
    },
    /// List the compiled-in cases
    Presets {
        #[arg(long)]
        json: bool,
    },
}

fn resolve(case: &str) -> Result<ExperimentConfig, Failure> {
    if let Some(p) = preset::find(case) {
        return Ok(p.config());
    }
    let path = Path::new(case);
    if path.is_file() {
        return ExperimentConfig::from_file(path).map_err(Failure::validation);
    }
    let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
    Err(Failure::validation(format!(
        "{case:?} is neither a preset ({}) nor a config file",
        names.join(", ")
    )))
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::validation(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(Failure::io)
}

fn list_presets(json: bool) -> String {
    if json {
        let items: Vec<_> = PRESETS
            .iter()
            .map(|p| {
                let params: serde_json::Map<_, _> = p
                    .config()
                    .to_pairs()
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
                    .collect();
                serde_json::json!({ "name": p.name, "params": params })
            })
            .collect();
        serde_json::to_string_pretty(&items).unwrap() + "\n"
    } else {
        PRESETS
            .iter()
            .map(|p| format!("[{}]\n{}", p.name, p.config().to_text()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Prints to stdout; a closed pipe is not an error worth reporting.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Presets { json } => {
            emit(&list_presets(json));
            Ok(())
        }
        Command::Run {
            case,
            noise,
            seed,
            out,
            nx,
            nt,
        } => {
            let mut cfg = resolve(&case)?;
            if let Some(n) = noise {
                cfg.noise = parse_list(&n).map_err(|e| Failure::validation(format!("--noise: {e}")))?;
            }
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.nx = nx.unwrap_or(cfg.nx);
            cfg.nt = nt.unwrap_or(cfg.nt);
            cfg.out = out.or(cfg.out);
            cfg.validate().map_err(Failure::validation)?;
            init_threads()?;
            let result = run::run_case(&cfg)?;
            let dir = run::default_out_dir(&cfg);
            run::write_files(&dir, &run::case_files(&result))?;
            emit(&format!("{}out={}\n", run::summary(&result), dir.display()));
            Ok(())
        }
        Command::Scan {
            case,
            bracket,
            samples,
            out,
            nx,
            nt,
        } => {
            let mut cfg = resolve(&case)?;
            cfg.nx = nx.unwrap_or(cfg.nx);
            cfg.nt = nt.unwrap_or(cfg.nt);
            let bracket = bracket.map(|b| (b[0], b[1]));
            init_threads()?;
            let (cfg, landscape) = run::scan_case(&cfg, bracket, samples)?;
            let summary = run::scan_summary(&cfg, &landscape);
            if let Some(dir) = out {
                run::write_files(
                    &dir,
                    &[
                        ("landscape.csv", run::landscape_csv(&landscape)),
                        ("summary.txt", summary.clone()),
                    ],
                )?;
            }
            emit(&summary);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.record());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
