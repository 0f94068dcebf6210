fn main() {
    std::process::exit(spacing_lab::cli::run_from_args(std::env::args_os()));
}
