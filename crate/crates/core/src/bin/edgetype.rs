fn main() {
    std::process::exit(edgetype::cli::run(std::env::args_os()));
}
