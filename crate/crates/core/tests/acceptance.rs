//! Acceptance run: every self-test suite at full size with the default seed,
//! each checked against its own time limit.

use qvspi::selftest::{self, SelftestConfig, SuiteReport};

fn run(suite: selftest::Suite, cfg: &SelftestConfig) -> SuiteReport {
    let report = suite(cfg);
    println!("{}", report.summary());
    for f in report.failures.iter().skip(1) {
        println!("       also: {f}");
    }
    report
}

#[test]
fn acceptance_criteria() {
    let cfg = SelftestConfig::default();
    let reports: Vec<SuiteReport> = selftest::suites().into_iter().map(|s| run(s, &cfg)).collect();
    assert_eq!(reports.len(), 10);
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.summary()).collect();
    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}

#[test]
fn tampered_pi_enclosure_fails_the_scalar_criterion() {
    let cfg = SelftestConfig::default();
    let report = selftest::suite_scalar_tampered(&cfg);
    println!("negative control: {}", report.summary());
    assert!(report.failure_count > 0);
}
