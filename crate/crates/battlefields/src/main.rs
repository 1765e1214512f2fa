fn main() {
    std::process::exit(battlefields::cli::run());
}
