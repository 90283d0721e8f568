fn main() {
    std::process::exit(flagres::cli::main_with_args(std::env::args_os()));
}
