use clap::Parser;

fn main() {
    let cli = hyperfpp_cli::Cli::parse();
    if let Err(e) = hyperfpp_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
