use clap::Parser;

fn main() {
    let cli = sectorgraph::cli::Cli::parse();
    std::process::exit(sectorgraph::cli::run(cli));
}
