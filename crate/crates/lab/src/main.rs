fn main() {
    std::process::exit(rmt_lab::cli::main());
}
