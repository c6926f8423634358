fn main() {
    std::process::exit(heunbc::cli::run(std::env::args_os()));
}
