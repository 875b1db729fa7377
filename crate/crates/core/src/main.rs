fn main() {
    std::process::exit(assoc_totient::cli::run(std::env::args_os()));
}
