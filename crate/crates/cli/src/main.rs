use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = rpr_cli::run(&args, &mut out, &mut err);
    if out.flush().is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(code as u8)
}
