fn main() {
    std::process::exit(netrel::cli::main_with(std::env::args_os()));
}
