fn main() {
    std::process::exit(chiral_nri::cli::main_with_args(std::env::args_os()));
}
