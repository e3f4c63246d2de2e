fn main() {
    std::process::exit(homwb::cli::run(std::env::args_os()));
}
