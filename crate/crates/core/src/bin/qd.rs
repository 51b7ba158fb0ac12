fn main() {
    std::process::exit(quiverdual::cli::main());
}
