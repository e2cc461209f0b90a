use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let tol = std::env::var(thetakit_cli::TOL_ENV).ok();
    let code = thetakit_cli::run(
        std::env::args_os(),
        tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
