use std::path::PathBuf;
use std::process::ExitCode;

use cascade_ent::harness::{exit_code, run_experiment, write_outputs, ExperimentConfig, Mode};
use clap::Parser;

/// Run a configured experiment and write result.csv and meta.json.
#[derive(Parser, Debug)]
#[command(name = "cascade", version)]
struct Args {
    /// steady, trajectory, sweep-rabi, sweep-landscape, sweep-mismatch,
    /// sweep-duration, tomography-demo, fit-s21, fit-t1 or fit-lambda.
    mode: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to output.dir from the config, then ./out.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

fn run(args: &Args) -> cascade_ent::Result<()> {
    let mode = Mode::parse(&args.mode)?;
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    cfg.mode = mode;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let result = run_experiment(&cfg, args.workers)?;
    let dir = args.out.clone().or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    write_outputs(&result, &cfg, &dir)?;
    for (k, v) in &result.summary {
        println!("{k} = {v}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
