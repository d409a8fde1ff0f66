fn main() {
    std::process::exit(vantage_cli::run(std::env::args_os()));
}
