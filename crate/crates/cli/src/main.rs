fn main() {
    std::process::exit(thetatrace_cli::run(std::env::args().skip(1)));
}
