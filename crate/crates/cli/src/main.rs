fn main() {
    std::process::exit(stablewave_cli::run(std::env::args().collect()));
}
