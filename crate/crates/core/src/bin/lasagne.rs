fn main() {
    std::process::exit(lasagne::cli::main_with_args(std::env::args_os()));
}
