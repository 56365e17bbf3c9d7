use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(eigenlab::cli::run() as u8)
}
