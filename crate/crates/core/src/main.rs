fn main() {
    std::process::exit(uniseries::cli::run_cli(std::env::args_os()));
}
