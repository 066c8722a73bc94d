fn main() {
    std::process::exit(twc_cli::run_cli(std::env::args_os()));
}
