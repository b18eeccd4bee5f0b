fn main() {
    std::process::exit(steerlab::cli::main());
}
