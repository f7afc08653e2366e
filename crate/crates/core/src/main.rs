fn main() {
    std::process::exit(seqtop::cli::main_with_args(std::env::args()));
}
