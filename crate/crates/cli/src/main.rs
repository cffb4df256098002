fn main() {
    std::process::exit(ptmathieu_cli::run(std::env::args().collect()));
}
