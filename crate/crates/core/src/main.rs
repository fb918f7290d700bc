use clap::Parser;
use fdlab::experiments::{run, ExperimentConfig, RunError, EXPERIMENTS};
use std::process::ExitCode;

/// Runs one experiment from a JSON config and writes `<prefix>.csv` and
/// `<prefix>.json`.
///
/// Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
/// 4 a checked bound failed.
#[derive(Debug, Parser)]
#[command(name = "fdlab", version)]
struct Cli {
    /// Path of the JSON experiment config.
    #[arg(long, required_unless_present = "list")]
    config: Option<String>,
    /// Output path prefix; overrides the config's `output`.
    #[arg(long)]
    out: Option<String>,
    /// RNG seed; overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the experiment names and exit.
    #[arg(long)]
    list: bool,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, RunError> {
    let path = cli.config.as_deref().expect("clap enforces --config");
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{path}: {e}")))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.list {
        for name in EXPERIMENTS {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let result = load(&cli).and_then(|cfg| {
        let summary = run(&cfg)?;
        Ok((cfg, summary))
    });
    match result {
        Ok((cfg, summary)) => {
            for c in &summary.checks {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                println!("{mark} {} = {} {} {}", c.name, c.value, c.relation, c.bound);
            }
            println!("wrote {0}.csv and {0}.json", cfg.output);
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("fdlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
