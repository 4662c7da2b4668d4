fn main() {
    std::process::exit(bellvol::cli::run());
}
