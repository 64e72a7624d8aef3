fn main() {
    std::process::exit(idgalois_cli::run(std::env::args_os()));
}
