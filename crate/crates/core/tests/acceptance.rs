//! Runs the ten acceptance criteria and prints one line per criterion.
//! Built without the libtest harness so the table is always shown.

use rigiduality_core::suite::{criteria, run_criterion};

fn main() {
    let seed = std::env::var("RIGIDUALITY_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let all = criteria();
    assert_eq!(all.len(), 10, "every criterion runs");
    let mut failed = 0;
    for c in &all {
        let o = run_criterion(c.id, seed).expect("known criterion");
        println!("{}", o.summary_line());
        if !o.passed {
            failed += 1;
            for line in &o.details {
                println!("    {line}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", all.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
