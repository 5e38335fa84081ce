//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits nonzero if any fails. A check passes only if its exact property
//! holds and it finishes within its time budget.

use modeq::suite::{run_check, SuiteConfig, CRITERIA};
use std::time::{Duration, Instant};

/// Wall-clock budget per check, in seconds.
const BUDGET_SECS: [u64; CRITERIA] = [60, 120, 60, 300, 300, 60, 60, 300, 120, 120, 60];
const TOTAL_BUDGET_SECS: u64 = 15 * 60;

fn main() {
    // Accept and ignore libtest flags such as --nocapture or a filter.
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .filter(|k| (1..=CRITERIA).contains(k))
        .collect();
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let mut failures = 0;
    for id in 1..=CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let outcome = run_check(id, &cfg);
        let elapsed = t.elapsed();
        let budget = Duration::from_secs(BUDGET_SECS[id - 1]);
        let pass = outcome.pass && elapsed <= budget;
        failures += usize::from(!pass);
        let timing = format!("{:.1}s of {}s", elapsed.as_secs_f64(), budget.as_secs());
        println!(
            "{} [{id:>2}] {} ({timing})",
            if pass { "PASS" } else { "FAIL" },
            outcome.title
        );
        for d in &outcome.details {
            println!("       {d}");
        }
    }
    let total = start.elapsed();
    let within = total <= Duration::from_secs(TOTAL_BUDGET_SECS);
    println!(
        "{} total {:.1}s of {}s",
        if within { "PASS" } else { "FAIL" },
        total.as_secs_f64(),
        TOTAL_BUDGET_SECS
    );
    failures += usize::from(!within);
    if failures > 0 {
        std::process::exit(1);
    }
}
