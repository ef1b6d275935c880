use clap::Parser;

fn main() {
    let cli = seedlife_cli::Cli::parse();
    if let Err(e) = seedlife_cli::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
