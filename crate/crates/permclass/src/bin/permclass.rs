use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    match permclass::cli::run(std::env::args(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(permclass::cli::CliError::Usage(msg)) => {
            // clap already formats help/usage output
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(permclass::cli::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("permclass: {e}");
            ExitCode::FAILURE
        }
    }
}
