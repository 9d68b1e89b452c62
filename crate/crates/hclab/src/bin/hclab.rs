fn main() {
    std::process::exit(hclab::cli::run());
}
