use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twistlab::harness::commands::{
    cmd_calibrate, cmd_cone, cmd_product, cmd_verify, cmd_wf, resolve_config, Outcome, RunOptions,
};
use twistlab::par;

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Twisted products and global wavefront sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON job config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; falls back to TWISTLAB_THREADS.
    #[arg(long, env = "TWISTLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two fields (kind taken from the config).
    Product(Common),
    /// Twisted convolution of two fields.
    Star(Common),
    /// Estimate the global wavefront set of a field.
    Wf(Common),
    /// Exact cone computations.
    Cone(Common),
    /// Run a verification suite.
    Verify {
        /// products, wavefront, calculus, bridge or all.
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-measure normalization constants.
    Calibrate(Common),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let common = match &cli.command {
        Command::Product(c) | Command::Star(c) | Command::Wf(c) | Command::Cone(c) | Command::Calibrate(c) => c,
        Command::Verify { common, .. } => common,
    }
    .clone();
    let opts = RunOptions { config: common.config, out: common.out, seed: common.seed, threads: common.threads };
    let run = || -> twistlab::Result<Outcome> {
        let mut cfg = resolve_config(&opts)?;
        par::init_threads(cfg.threads);
        match &cli.command {
            Command::Product(_) => cmd_product(&mut cfg, &opts.out, false),
            Command::Star(_) => cmd_product(&mut cfg, &opts.out, true),
            Command::Wf(_) => cmd_wf(&cfg, &opts.out),
            Command::Cone(_) => cmd_cone(&cfg, &opts.out),
            Command::Verify { suite, .. } => cmd_verify(&mut cfg, suite.as_deref(), &opts.out),
            Command::Calibrate(_) => cmd_calibrate(&cfg, &opts.out),
        }
    };
    match run() {
        Ok(o) => ExitCode::from(o.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
