//! One PASS/FAIL line per acceptance criterion. Every comparison inside the
//! criteria is exact; the only tolerances are the wall-clock limits below and the
//! Weil band of criterion 10, whose width 2g⌈√q⌉ is fixed in the verify module.

use std::time::{Duration, Instant};

use hesslab::verify::{run_criterion, Scale, CRITERIA};

/// Wall-clock limits per criterion, in seconds.
const LIMITS: [(u8, u64); 10] = [(1, 5), (2, 5), (3, 1), (4, 300), (5, 1), (6, 10), (7, 5), (8, 1), (9, 30), (10, 120)];

#[test]
fn acceptance() {
    let scale = Scale::default();
    let mut failed = Vec::new();
    for (id, name) in CRITERIA {
        let limit = Duration::from_secs(LIMITS.iter().find(|l| l.0 == id).expect("limit").1);
        let start = Instant::now();
        let report = run_criterion(id, &scale);
        let elapsed = start.elapsed();
        let ok = report.passed() && elapsed <= limit;
        println!(
            "{} criterion {id}: {name} ({} checked, {} skipped, {:.2?} of {:?})",
            if ok { "PASS" } else { "FAIL" },
            report.checked,
            report.skipped,
            elapsed,
            limit,
        );
        for f in &report.failures {
            println!("    failure: {f}");
        }
        if elapsed > limit {
            println!("    over the time limit");
        }
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
