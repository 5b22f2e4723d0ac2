fn main() {
    std::process::exit(gaugecalc_cli::main_with_args(std::env::args_os()));
}
