fn main() {
    std::process::exit(seba_cli::main_with_env());
}
