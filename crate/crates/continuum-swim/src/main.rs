use clap::Parser;
use continuum_swim::cli;

fn main() {
    let args = cli::Cli::parse();
    if let Err(err) = cli::run(&args) {
        eprintln!("error: {err}");
        std::process::exit(cli::exit_code(&err));
    }
}
