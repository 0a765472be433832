fn main() {
    std::process::exit(scdforge::cli::run(std::env::args_os()));
}
