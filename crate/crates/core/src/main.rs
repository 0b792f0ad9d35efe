fn main() {
    std::process::exit(minibabel::cli::main());
}
