fn main() {
    std::process::exit(dgw_cli::run(std::env::args_os()));
}
