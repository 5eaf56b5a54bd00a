fn main() {
    std::process::exit(frey::cli::run(std::env::args_os()));
}
