fn main() {
    std::process::exit(strbut::cli::run(std::env::args_os()));
}
