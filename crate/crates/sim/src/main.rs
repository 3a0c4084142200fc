use std::io;
use std::process::ExitCode;

use congestion_sim::app::execute;
use congestion_sim::cli::parse_invocation;

fn main() -> ExitCode {
    let inv = match parse_invocation(std::env::args_os()) {
        Ok(inv) => inv,
        Err(e) => e.exit(),
    };
    match execute(&inv, &mut io::stdout().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
