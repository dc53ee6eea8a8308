//! One line per acceptance criterion. Tolerances live in
//! `twistlab::harness::suites::tol`; runtime budgets are pinned below.

use std::collections::BTreeSet;
use std::io::Write;

use twistlab::harness::suites::{run_suite, SuiteContext};
use twistlab::harness::Check;

const CRITERIA: [(u32, &str, f64); 9] = [
    (1, "products agree with the quadrature oracle", 30.0),
    (2, "theta = 0 product is pointwise", 5.0),
    (3, "associativity defect small and shrinking", 120.0),
    (4, "calibrated Fourier relation between the products", 60.0),
    (5, "catalog wavefront classification", 60.0),
    (6, "Fourier rotation and chirp shear of estimates", 120.0),
    (7, "exact cone calculus verdicts", 10.0),
    (8, "estimated product wavefront inside prediction", 600.0),
    (9, "delta class closed under twisted convolution", 1.0),
];

fn runtime(checks: &[&Check]) -> f64 {
    let mut seen = BTreeSet::new();
    checks.iter().filter(|c| seen.insert(c.job)).map(|c| c.seconds).sum()
}

#[test]
fn acceptance() {
    let report = run_suite("all", &SuiteContext::default()).expect("suite runs");
    let mut failed = Vec::new();
    for (k, label, budget) in CRITERIA {
        let checks: Vec<&Check> = report.checks.iter().filter(|c| c.criterion == k).collect();
        let secs = runtime(&checks);
        let bad: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        let ok = !checks.is_empty() && bad.is_empty() && secs <= budget;
        let measured: Vec<String> = checks.iter().map(|c| format!("{}={}", c.name, c.measured)).collect();
        // written to the raw stream so the lines show without --nocapture
        let _ = writeln!(
            std::io::stderr(),
            "{} criterion {k}: {label} [{:.2}s / {budget}s] {}",
            if ok { "PASS" } else { "FAIL" },
            secs,
            measured.join(" ")
        );
        if !ok {
            failed.push((k, bad));
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
