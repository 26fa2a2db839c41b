fn main() {
    std::process::exit(astute_np::cli::run(std::env::args_os()));
}
