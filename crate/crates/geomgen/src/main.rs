use clap::Parser;

fn main() {
    if let Err(e) = geomgen::cli::run(geomgen::cli::Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
