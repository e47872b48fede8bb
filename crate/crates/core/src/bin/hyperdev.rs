fn main() {
    std::process::exit(hyperdev::cli::main_with_args(std::env::args_os()));
}
