fn main() {
    std::process::exit(starwall_cli::main_with_args(std::env::args_os()));
}
