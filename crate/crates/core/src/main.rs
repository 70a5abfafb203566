fn main() {
    std::process::exit(quadnorm::cli::main_with_args(std::env::args_os()));
}
