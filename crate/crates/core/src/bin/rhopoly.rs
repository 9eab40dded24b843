fn main() {
    std::process::exit(rhopoly::cli::run(std::env::args_os()));
}
