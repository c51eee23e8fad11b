//! Runs the fast acceptance criteria and prints their reports.

use qudit_shadow::verify::{run_criteria, Criterion, VerifyOptions};

fn main() {
    let only = [
        Criterion::A1,
        Criterion::A2,
        Criterion::A5,
        Criterion::A6,
        Criterion::A8,
        Criterion::A9,
    ];
    for r in run_criteria(&VerifyOptions {
        only: only.to_vec(),
        fault: None,
    }) {
        println!("{r}");
    }
}
