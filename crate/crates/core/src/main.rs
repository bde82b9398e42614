fn main() {
    std::process::exit(folmod::cli::main_with_args(std::env::args_os()));
}
