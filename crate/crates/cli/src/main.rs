use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = lensreeb_cli::run(&argv);
    ExitCode::from(code as u8)
}
