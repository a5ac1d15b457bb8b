fn main() {
    std::process::exit(nilgrade::cli::run(std::env::args_os()));
}
