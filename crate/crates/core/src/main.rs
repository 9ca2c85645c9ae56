fn main() {
    std::process::exit(hyperess::cli::run(std::env::args_os()));
}
