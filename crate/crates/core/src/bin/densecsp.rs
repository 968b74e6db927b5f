fn main() {
    std::process::exit(densecsp::cli::run(std::env::args_os()));
}
