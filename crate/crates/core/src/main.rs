use clap::Parser;

use cider_eval::cli::{self, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Cli::parse();
    if let Err(err) = cli::run(args) {
        eprintln!("{}", cli::error_json(&err));
        std::process::exit(cli::exit_code(&err));
    }
}
