use clap::Parser;

fn main() {
    let cli = zeta_spectra::cli::Cli::parse();
    std::process::exit(zeta_spectra::cli::run(cli));
}
