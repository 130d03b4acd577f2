fn main() {
    std::process::exit(fracmg::cli::run(std::env::args_os()));
}
