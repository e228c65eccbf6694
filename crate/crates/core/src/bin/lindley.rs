fn main() {
    std::process::exit(lindley::cli::main_with_args(std::env::args_os()));
}
