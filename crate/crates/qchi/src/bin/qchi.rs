use std::process::ExitCode;

fn main() -> ExitCode {
    qchi::cli::run()
}
