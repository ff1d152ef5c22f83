use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wandering::cli::{exit_status, list_suites, render_scenario, run_scenario, RunOptions, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "wandering",
    version,
    about = "Certificates, windings and rasters for meromorphic maps with wandering domains"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a bundled scenario by name.
    Run {
        scenario: String,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        budget_boxes: Option<u64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// List bundled scenarios and their item anchors.
    Suites,
    /// Render the raster of a scenario as a binary pixmap.
    Render {
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_iter: Option<usize>,
    },
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        #[cfg(not(feature = "parallel"))]
        eprintln!("warning: built without parallelism, ignoring --threads {n}");
    }
    let code = match cli.command {
        Command::Suites => {
            emit(&list_suites());
            0
        }
        Command::Run { scenario, out, budget_boxes, max_iter } => {
            let opts = RunOptions { budget_boxes, max_iter, ..RunOptions::default() };
            let result = run_scenario(&scenario, &opts);
            match &result {
                Ok(report) => {
                    eprint!("{}", report.summary());
                    let json = report.to_json();
                    match &out {
                        Some(path) => {
                            if let Err(e) = std::fs::write(path, json + "\n") {
                                eprintln!("error: {e}");
                                return ExitCode::from(EXIT_CONFIG as u8);
                            }
                        }
                        None => emit(&(json + "\n")),
                    }
                }
                Err(e) => eprintln!("error: {e}"),
            }
            exit_status(&result)
        }
        Command::Render { scenario, out, max_iter } => {
            let opts = RunOptions { max_iter, ..RunOptions::default() };
            let result = render_scenario(&scenario, &out, &opts);
            match &result {
                Ok(report) => eprint!("{}", report.summary()),
                Err(e) => eprintln!("error: {e}"),
            }
            exit_status(&result)
        }
    };
    ExitCode::from(code as u8)
}
