fn main() {
    std::process::exit(crosscount_cli::cli_main(std::env::args_os()));
}
