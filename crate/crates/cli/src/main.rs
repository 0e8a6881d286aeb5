fn main() {
    std::process::exit(tsq_cli::main_with(std::env::args_os().collect()));
}
