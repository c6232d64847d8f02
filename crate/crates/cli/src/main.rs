fn main() {
    std::process::exit(rmt_cli::dispatch(std::env::args_os()));
}
