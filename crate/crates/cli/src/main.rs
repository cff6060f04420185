use std::process::ExitCode;

use charkit_cli::args::Cli;
use charkit_cli::commands::execute;
use charkit_cli::error::CliError;
use clap::Parser;

fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CHARKIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("CHARKIT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    init_threads()?;
    let outcome = execute(cli)?;
    for (path, text) in &outcome.side_files {
        write_file(path, text)?;
    }
    let text = outcome.render(cli.global.format);
    match &cli.global.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("charkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
