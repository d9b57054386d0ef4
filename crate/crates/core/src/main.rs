fn main() {
    std::process::exit(motoguard::cli::cli_main(std::env::args().collect()));
}
