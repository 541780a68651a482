fn main() {
    std::process::exit(subset_factor::cli::run(std::env::args_os()));
}
