fn main() {
    std::process::exit(weylab::cli::run_main());
}
