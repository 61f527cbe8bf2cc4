fn main() {
    std::process::exit(gradedcm::cli::main_with_args(std::env::args_os()));
}
