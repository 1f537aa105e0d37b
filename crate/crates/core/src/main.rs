use std::process::ExitCode;

fn main() -> ExitCode {
    spectral_anomaly::cli::run(std::env::args_os())
}
