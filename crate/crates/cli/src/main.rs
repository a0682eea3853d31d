use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (result, json) = digitop_cli::run(std::env::args_os());
    let rendered = result.render(json);
    if result.status == digitop_cli::Status::Error && !json {
        eprint!("{rendered}");
    } else {
        let _ = std::io::stdout().write_all(rendered.as_bytes());
    }
    ExitCode::from(result.exit_code() as u8)
}
