fn main() {
    std::process::exit(mediagraph::cli::main());
}
