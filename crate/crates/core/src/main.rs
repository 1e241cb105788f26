use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lambert_series::cli::run(std::env::args_os()) as u8)
}
