fn main() {
    std::process::exit(dendrite::cli_main());
}
