fn main() {
    std::process::exit(subgrowth_cli::dispatch(std::env::args()));
}
