use std::process::ExitCode;

use clap::Parser;
use linres_cli::{run, Cli, Failure};

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("LINRES_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().ok();
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::Invalid { kind: "Usage".into(), message: e.to_string() };
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.exit_code() as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
