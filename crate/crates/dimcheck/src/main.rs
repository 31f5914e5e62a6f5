use clap::Parser;

fn main() -> std::process::ExitCode {
    let cli = dimcheck::cli::Cli::parse();
    match dimcheck::cli::run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::FAILURE
        }
    }
}
