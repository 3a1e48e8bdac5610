fn main() {
    std::process::exit(oscillax::cli::run(std::env::args_os()));
}
