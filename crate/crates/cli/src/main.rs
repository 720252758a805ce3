use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = covol_cli::run(std::env::args_os());
    if !outcome.stdout.is_empty() {
        print!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        let _ = write!(std::io::stderr(), "{}", outcome.stderr);
    }
    ExitCode::from(outcome.code.clamp(0, 255) as u8)
}
