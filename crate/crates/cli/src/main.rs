use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = tcspace_cli::run(std::env::args_os());
    if outcome.code == tcspace_cli::EXIT_INPUT {
        eprint!("{}", outcome.text);
    } else {
        print!("{}", outcome.text);
    }
    ExitCode::from(outcome.code)
}
