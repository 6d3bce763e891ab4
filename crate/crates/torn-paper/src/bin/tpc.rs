use std::io::Write;

use clap::Parser;
use torn_paper::cli;

fn main() {
    let parsed = cli::Cli::parse();
    match cli::run(parsed) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(err) = writeln!(stdout, "{output}") {
                if err.kind() == std::io::ErrorKind::BrokenPipe {
                    // Downstream consumer (head, etc.) closed the pipe.
                    std::process::exit(0);
                }
                eprintln!("error: {err}");
                std::process::exit(1);
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(cli::exit_code(&err));
        }
    }
}
