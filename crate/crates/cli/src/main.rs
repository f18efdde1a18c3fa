use std::process::ExitCode;

use graphspread_cli::run;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("GRAPHSPREAD_LOG"))
        .format_timestamp(None)
        .init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdout = std::io::stdout().lock();
    match run(&args, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let text = e.to_string();
            eprintln!("graphspread: {}", text.lines().next().unwrap_or_default());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
