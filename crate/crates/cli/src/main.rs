fn main() {
    std::process::exit(repeval_cli::run(std::env::args_os()));
}
