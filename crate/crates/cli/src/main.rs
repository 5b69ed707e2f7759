fn main() {
    std::process::exit(idm_cli::run(std::env::args_os()));
}
