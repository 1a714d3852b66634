fn main() {
    std::process::exit(twistvol::cli::run());
}
