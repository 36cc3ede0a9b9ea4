fn main() -> std::process::ExitCode {
    ymh::cli::main_with_args(std::env::args_os())
}
