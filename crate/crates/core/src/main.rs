fn main() {
    std::process::exit(posterior_indices::cli::run(std::env::args_os()));
}
