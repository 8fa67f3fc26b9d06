use std::process::ExitCode;

fn main() -> ExitCode {
    discasp::cli::main_with_args(std::env::args())
}
