use std::process::ExitCode;

fn main() -> ExitCode {
    arnold_complexity::cli::main(std::env::args_os())
}
