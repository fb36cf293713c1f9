fn main() -> std::process::ExitCode {
    donsa::cli::main_from_args(std::env::args_os())
}
