//! `lightcone`: runs one check or computation per invocation and writes
//! `summary.json` (plus CSV files for traces and batches) to `--out`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 when the
//! run stops on an error (bad flags, unreadable input).

mod commands;
mod inputs;
mod report;
mod settings;

use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match settings::parse(std::env::args().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let out = cli.settings.out_dir();
    match commands::run(cli.command, &cli.settings) {
        Ok(report) => {
            if let Err(e) = report::write_report(&out, cli.command, &cli.settings, &report) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            for c in report.checks.iter().filter(|c| !c.passed) {
                eprintln!("FAILED {}: {} {} {} does not hold", c.name, c.measured, c.relation, c.limit);
            }
            let status = if report.passed() { "passed" } else { "failed" };
            println!("{status}; summary in {}", out.join("summary.json").display());
            ExitCode::from(u8::from(!report.passed()))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Err(w) = report::write_error(&out, cli.command, &cli.settings, &e) {
                eprintln!("error: {w:#}");
            }
            ExitCode::from(2)
        }
    }
}
