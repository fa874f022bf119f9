fn main() {
    std::process::exit(mrt_cli::cli::run(std::env::args_os()));
}
