fn main() {
    std::process::exit(bench_cli::cli::main_with_args(std::env::args_os()));
}
