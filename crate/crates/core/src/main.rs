use std::process::ExitCode;

use sorkin_core::cli::{parse_args, run_figure2, run_sweep, run_verify, CliError, Invocation};

fn main() -> ExitCode {
    let invocation = match parse_args(std::env::args_os().skip(1)) {
        Ok(inv) => inv,
        Err(CliError::Usage(e)) => e.exit(),
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = match invocation {
        Invocation::Sweep(job) => run_sweep(&job).map(|_| true),
        Invocation::Figure2(job) => run_figure2(&job).map(|paths| {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            true
        }),
        Invocation::Verify(opts) => run_verify(&opts, std::io::stdout()).map(|r| r.passed()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
