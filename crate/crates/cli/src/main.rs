fn main() {
    std::process::exit(heisplane_cli::run(std::env::args_os()));
}
