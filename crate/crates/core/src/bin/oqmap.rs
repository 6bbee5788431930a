fn main() {
    std::process::exit(oqmap::cli::run(std::env::args_os()));
}
