use std::process::ExitCode;

fn main() -> ExitCode {
    caustics::cli::run()
}
