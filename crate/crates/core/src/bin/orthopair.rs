fn main() {
    std::process::exit(orthopair::cli::run(std::env::args_os()));
}
