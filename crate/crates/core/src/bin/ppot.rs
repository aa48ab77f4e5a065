use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ppot::cli::{run, Command, Overrides};
use ppot::config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "ppot", version, about = "Weighted incomplete-polynomial extremal functions")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `theta` (e.g. 1/3).
    #[arg(long)]
    theta: Option<String>,
    /// Overrides `N` (and clears `N_list`).
    #[arg(long = "N")]
    n: Option<u64>,
    /// Overrides the mesh or quadrature resolution `M`.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Overrides `method`.
    #[arg(long)]
    method: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = RunConfig::load(&args.config).and_then(|mut cfg| {
        Overrides {
            theta: args.theta,
            n: args.n,
            m: args.m,
            method: args.method,
            out: args.out,
        }
        .apply(&mut cfg);
        run(args.command, &cfg)
    });
    match result {
        Ok(o) => {
            println!("{}", o.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ppot {}: {e}", args.command);
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
