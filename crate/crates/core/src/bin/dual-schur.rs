use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dual_schur::config::ExperimentConfig;
use dual_schur::run::{default_out_dir, run, Command};
use dual_schur::Error;

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    Sample,
    LimitShape,
    Kernel,
    Fluctuations,
    Critical,
    TwTable,
}

#[derive(Parser)]
#[command(version, about = "Dual Schur measures: sampling, limit shapes and fluctuations")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Experiment config, or a manifest from an earlier run.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sample count for `sample`, `fluctuations` and `critical`.
    #[arg(long)]
    count: Option<usize>,
    /// Gap sizes for `critical`; repeatable.
    #[arg(long)]
    delta: Vec<u32>,
    /// Grid step for `limit-shape` and `tw-table`.
    #[arg(long)]
    step: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let command = match args.command {
        Cmd::Sample => Command::Sample,
        Cmd::LimitShape => Command::LimitShape,
        Cmd::Kernel => Command::Kernel,
        Cmd::Fluctuations => Command::Fluctuations,
        Cmd::Critical => Command::Critical,
        Cmd::TwTable => Command::TwTable,
    };
    let result = ExperimentConfig::load(&args.config).and_then(|mut cfg| {
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        if let Some(w) = args.workers {
            cfg.workers = w;
        }
        if let Some(n) = args.count {
            cfg.sample.count = n;
            cfg.fluctuations.count = n;
            cfg.critical.samples = n;
        }
        if !args.delta.is_empty() {
            cfg.critical.deltas = args.delta.clone();
        }
        if let Some(s) = args.step {
            cfg.limit_shape.grid_step = s;
            cfg.tw_table.step = s;
        }
        let out = args.out.clone().unwrap_or_else(|| default_out_dir(command));
        run(command, &cfg, &out).map(|m| (m, out))
    });
    match result {
        Ok((m, out)) => {
            println!("{}: wrote {} to {}", command.name(), m.outputs.join(", "), out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ConfigInvalid(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
