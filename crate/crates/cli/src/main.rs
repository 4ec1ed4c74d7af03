use clap::Parser;

fn main() {
    let cli = weyl_cli::Cli::parse();
    if let Err(e) = weyl_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code);
    }
}
