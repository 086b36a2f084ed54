use std::io::IsTerminal;
use std::process::ExitCode;

use qoswb::io::cli;

fn main() -> ExitCode {
    let styled = std::io::stdout().is_terminal() && std::env::var_os(cli::NO_COLOR_ENV).is_none();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = cli::run(std::env::args_os(), &mut out, &mut err, styled);
    ExitCode::from(code as u8)
}
