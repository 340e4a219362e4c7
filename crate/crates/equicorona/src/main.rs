use clap::Parser;

use equicorona::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
