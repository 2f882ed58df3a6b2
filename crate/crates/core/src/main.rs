fn main() {
    std::process::exit(spectral_sumrules::cli::run(std::env::args_os()));
}
