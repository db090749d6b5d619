use std::process::ExitCode;

use clap::Parser;
use qmean_cli::{execute, Args, ExperimentConfig};

fn main() -> ExitCode {
    let args = Args::parse();

    if let Some(threads) = std::env::var("QMEAN_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("warning: QMEAN_THREADS ignored: {e}");
        }
    }

    let result = ExperimentConfig::try_from(args).and_then(|config| execute(&config));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
