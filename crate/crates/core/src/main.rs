use emft_quench::harness::cli;

fn main() {
    std::process::exit(cli::run());
}
