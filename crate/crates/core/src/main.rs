fn main() {
    std::process::exit(polar_gas::cli::run());
}
