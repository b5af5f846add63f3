use clap::Parser;

fn main() {
    let cli = bcw::cli::Cli::parse();
    std::process::exit(bcw::cli::run(cli));
}
