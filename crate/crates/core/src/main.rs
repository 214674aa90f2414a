fn main() {
    std::process::exit(uncrossing::cli::run(std::env::args_os()));
}
