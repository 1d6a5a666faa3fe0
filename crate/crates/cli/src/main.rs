fn main() {
    let code = sparkles_cli::dispatch(std::env::args_os());
    std::process::exit(code);
}
