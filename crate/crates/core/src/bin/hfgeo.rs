use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    let outcome = homogeneous_finsler::cli::run_command(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(outcome.exit_code as u8)
}
