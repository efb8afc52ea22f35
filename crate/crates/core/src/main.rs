use clap::Parser;

fn main() {
    std::process::exit(loghen::cli::run(loghen::cli::Cli::parse()));
}
