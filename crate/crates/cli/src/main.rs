fn main() {
    std::process::exit(veech_cli::run(std::env::args_os()));
}
