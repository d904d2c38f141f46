fn main() {
    std::process::exit(aflt_cli::run(std::env::args_os()));
}
