//! The command-line surface driven in-process: a Gaussian rule for e^{-x⁴}
//! written as CSV to standard output.

use clap::Parser;
use rhjacobi::cli::{run, Cli};

fn main() -> rhjacobi::Result<()> {
    let cli = Cli::parse_from(["rhjacobi", "quadrature", "--weight", "poly:0,0,0,0,1", "--n", "12"]);
    let ok = run(&cli, &mut std::io::stdout().lock())?;
    eprintln!("rows ok: {ok}");
    Ok(())
}
