fn main() {
    std::process::exit(lulc::cli::run(std::env::args_os()));
}
