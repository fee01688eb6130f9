fn main() {
    std::process::exit(dirmin::cli::run(std::env::args_os()));
}
