fn main() {
    std::process::exit(ballmap::cli::main_with_args(std::env::args_os()));
}
