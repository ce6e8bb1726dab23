//! Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances and grids are pinned in `orlicz_tf::suite::run_check`.

use std::process::ExitCode;

use orlicz_tf::suite::{run_all, CRITERIA};

fn main() -> ExitCode {
    // cargo passes libtest flags such as --nocapture; they do not apply here
    let seed = 42;
    println!("running {} acceptance criteria (seed {seed})", CRITERIA.len());
    let results = run_all(seed);
    for r in &results {
        println!("{}", r.summary_line());
        if !r.pass {
            println!("       detail: {}", r.detail);
        }
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
