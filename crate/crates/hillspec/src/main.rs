use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = hillspec::run(std::env::args_os());
    ExitCode::from(outcome.exit as u8)
}
