use std::io::{self, Write};
use std::process::ExitCode;

// Normalization and enumeration recurse on formula depth.
const STACK: usize = 256 << 20;

fn main() -> ExitCode {
    let code = std::thread::Builder::new()
        .stack_size(STACK)
        .spawn(|| {
            let stdin = io::stdin();
            let mut input = stdin.lock();
            let stdout = io::stdout();
            let mut out = io::BufWriter::new(stdout.lock());
            let mut err = io::stderr();
            let code = isopoly::cli::run(std::env::args_os(), &mut input, &mut out, &mut err);
            let _ = out.flush();
            code
        })
        .expect("spawn worker thread")
        .join()
        .unwrap_or(3);
    ExitCode::from(code as u8)
}
