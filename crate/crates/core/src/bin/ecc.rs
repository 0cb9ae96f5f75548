fn main() {
    std::process::exit(eccentricity::cli::run_from_env());
}
