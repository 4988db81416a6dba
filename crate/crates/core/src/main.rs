fn main() {
    std::process::exit(solarmodel::cli::main_with_args(std::env::args_os()));
}
