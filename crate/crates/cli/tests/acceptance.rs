//! Acceptance suite: one line per criterion, exact tolerances, wall-clock limits.
//!
//! Run with `cargo test -p ivhs-lab --test acceptance -- --nocapture` to see the lines.

use ivhs_lab::selftest;

#[test]
fn acceptance_criteria() {
    let report = selftest::full_selftest(101, 0).expect("selftest runs");
    let mut ids: Vec<u32> = Vec::new();
    for c in &report.criteria {
        println!("{}", c.line());
        ids.push(c.id);
    }
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
    let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.id, c.detail)).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}

/// The suite is characteristic-independent, so verdicts must agree across primes.
#[test]
fn verdicts_agree_across_primes() {
    let mut verdicts = Vec::new();
    for p in [101, 983, 10007] {
        let report = selftest::selftest(p, 1).expect("selftest runs");
        for c in &report.criteria {
            println!("p = {p:>5}: {}", c.line());
        }
        verdicts.push((p, report.criteria.iter().map(|c| c.passed).collect::<Vec<_>>()));
    }
    let disagree: Vec<_> = verdicts.iter().filter(|(_, v)| *v != verdicts[0].1).map(|(p, _)| *p).collect();
    assert!(disagree.is_empty(), "verdicts at p = {disagree:?} differ from p = 101");
    assert!(verdicts[0].1.iter().all(|&ok| ok));
}
