fn main() {
    std::process::exit(symmetroid::cli::run_command(std::env::args_os()));
}
