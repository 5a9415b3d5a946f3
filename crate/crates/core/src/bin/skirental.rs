fn main() {
    std::process::exit(skirental::cli::run(std::env::args_os()));
}
