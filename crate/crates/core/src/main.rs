fn main() {
    std::process::exit(blowupchow::cli::main_with_env());
}
