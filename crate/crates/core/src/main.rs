fn main() {
    std::process::exit(castnet::cli::run(std::env::args_os()));
}
