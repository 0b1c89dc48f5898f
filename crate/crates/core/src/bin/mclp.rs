fn main() {
    std::process::exit(mclp::cli::cli_main(std::env::args_os()));
}
