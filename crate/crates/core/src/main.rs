fn main() {
    std::process::exit(dpkit::cli::run(std::env::args_os()));
}
