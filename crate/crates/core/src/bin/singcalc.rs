fn main() {
    std::process::exit(singcalc::cli::main_with(std::env::args_os()));
}
