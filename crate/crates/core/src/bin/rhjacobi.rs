fn main() {
    std::process::exit(rhjacobi::cli::main_with_args(std::env::args_os()));
}
