fn main() {
    std::process::exit(enabling_cli::run(std::env::args_os()));
}
