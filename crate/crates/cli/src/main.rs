use clap::Parser;

fn main() {
    let cli = okounkov_cli::Cli::parse();
    std::process::exit(okounkov_cli::run(&cli));
}
