fn main() {
    std::process::exit(nmda::cli::run(std::env::args_os()));
}
