fn main() {
    std::process::exit(hypheat::cli::run(std::env::args()));
}
