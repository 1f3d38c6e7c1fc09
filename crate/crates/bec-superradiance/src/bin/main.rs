use std::process::ExitCode;

fn main() -> ExitCode {
    bec_superradiance::cli::run()
}
