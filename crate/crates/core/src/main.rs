fn main() {
    std::process::exit(twoec::cli::main_with_args(std::env::args_os()));
}
