use clap::Parser;

fn main() {
    let cli = perioda::cli::Cli::parse();
    std::process::exit(perioda::cli::main_entry(cli));
}
