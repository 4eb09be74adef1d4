fn main() {
    std::process::exit(maxclass::cli::main_entry());
}
