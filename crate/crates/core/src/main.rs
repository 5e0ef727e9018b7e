fn main() {
    std::process::exit(lowreg_nlse::cli::main_with_args(std::env::args_os()));
}
