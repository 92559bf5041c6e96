use std::process::ExitCode;

fn main() -> ExitCode {
    simplederiv::cli::main_from(std::env::args_os())
}
