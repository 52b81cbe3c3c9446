fn main() -> std::process::ExitCode {
    sharpgrad::cli::run(std::env::args_os())
}
