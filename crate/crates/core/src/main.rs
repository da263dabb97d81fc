fn main() {
    std::process::exit(nominate_core::cli::run_cli(std::env::args_os()));
}
