//! Runs every acceptance criterion and prints one PASS/FAIL line for each.
//!
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use bicriteria_harness::accept::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _, _) in CRITERIA {
        let report = run_criterion(id);
        println!("{report}");
        for f in &report.failures {
            println!("    {f}");
        }
        if !report.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
