//! `arithdyn COMMAND [INPUT]`: reads a JSON job, writes a JSON report.
//!
//! Exit status: 0 when every item is decided, 2 when some item is undecided or
//! bound-limited, 1 on any error.

mod commands;
mod config;
mod job;

use clap::Parser;
use commands::{Command, Status};
use job::{Job, Overrides};
use serde_json::json;
use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "arithdyn", version, about = "Exact arithmetic dynamics of polynomial maps")]
struct Cli {
    command: Command,
    /// Job file; `-` or absent reads standard input.
    input: Option<String>,
    /// Report path; overrides `output` in the job.
    #[arg(short, long)]
    output: Option<String>,
    /// Omit timing so identical runs produce identical bytes.
    #[arg(long)]
    compare: bool,
    /// Print the canonical form of the job and exit.
    #[arg(long)]
    print_config: bool,
    #[arg(long, env = "ARITHDYN_PRECISION_BITS")]
    precision_bits: Option<u32>,
    #[arg(long, env = "ARITHDYN_ITER_BUDGET")]
    iter_budget: Option<usize>,
    #[arg(long, env = "ARITHDYN_BIDEGREE")]
    bidegree: Option<u32>,
    #[arg(long, env = "ARITHDYN_ORBIT_LEN")]
    orbit_len: Option<usize>,
    #[arg(long, env = "ARITHDYN_NMAX")]
    nmax: Option<usize>,
    #[arg(long, env = "ARITHDYN_JET_ORDER")]
    jet_order: Option<usize>,
}

fn read_input(path: Option<&str>) -> Result<String, String> {
    let mut text = String::new();
    match path {
        None | Some("-") => std::io::stdin().read_to_string(&mut text).map(|_| ()),
        Some(p) => std::fs::read_to_string(p).map(|t| text = t),
    }
    .map_err(|e| format!("reading {}: {e}", path.unwrap_or("standard input")))?;
    Ok(text)
}

fn fail(command: &str, message: String) -> ExitCode {
    let report = json!({ "command": command, "error": { "kind": "config", "message": message } });
    eprintln!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let start = Instant::now();
    let config = match read_input(cli.input.as_deref()).and_then(|t| config::parse(&t)).and_then(|c| c.canonical()) {
        Ok(c) => c,
        Err(e) => return fail(&name, e),
    };
    if cli.print_config {
        return match config.to_canonical_string() {
            Ok(t) => {
                println!("{t}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(&name, e),
        };
    }
    let overrides = Overrides {
        precision_bits: cli.precision_bits,
        iter_budget: cli.iter_budget,
        bidegree: cli.bidegree,
        orbit_len: cli.orbit_len,
        nmax: cli.nmax,
        jet_order: cli.jet_order,
    };
    let job = match Job::build(&config, &overrides) {
        Ok(j) => j,
        Err(e) => return fail(&name, e),
    };
    let items = commands::run(cli.command, &job);
    let worst = items.iter().map(|i| i.status).max().unwrap_or(Status::Decided);
    let mut warnings: Vec<String> = items.iter().flat_map(|i| i.warnings.iter().cloned()).collect();
    warnings.extend(items.iter().filter(|i| i.status == Status::Failed).map(|i| format!("{}: failed", i.label)));
    let mut report = json!({
        "command": name,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "parameters": job.params.to_json(),
        "results": items.iter().map(|i| i.to_json()).collect::<Vec<_>>(),
        "warnings": warnings,
    });
    if !cli.compare {
        report["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    match cli.output.as_ref().or(config.output.as_ref()) {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                return fail(&name, format!("writing {path}: {e}"));
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(match worst {
        Status::Decided => 0,
        Status::Undecided => 2,
        Status::Failed => 1,
    })
}
