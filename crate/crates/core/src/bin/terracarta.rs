fn main() {
    std::process::exit(terracarta::cli::run(std::env::args_os()));
}
