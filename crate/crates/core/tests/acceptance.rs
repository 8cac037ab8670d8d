use std::io::Write;
use std::time::{Duration, Instant};

use cplstab::checks::{run_suite, CheckOptions};

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [&'static str],
    budget: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, title: "example vectors", suites: &["examples"], budget: secs(1) },
    Criterion { id: 2, title: "model relations", suites: &["relations"], budget: secs(30) },
    Criterion { id: 3, title: "Weyl module relations", suites: &["weyl"], budget: secs(30) },
    Criterion { id: 4, title: "basis ranks", suites: &["rank"], budget: secs(120) },
    Criterion { id: 5, title: "straightening oracle", suites: &["t1"], budget: secs(120) },
    Criterion { id: 6, title: "k-independence", suites: &["c2"], budget: secs(120) },
    Criterion { id: 7, title: "diagonal case", suites: &["t2"], budget: secs(60) },
    Criterion { id: 8, title: "appendix identities", suites: &["appendix"], budget: secs(60) },
    Criterion { id: 9, title: "translation operators", suites: &["fkprop", "offdiag"], budget: secs(120) },
    Criterion { id: 10, title: "automorphisms", suites: &["automorphisms"], budget: secs(120) },
    Criterion { id: 11, title: "stability", suites: &["stability"], budget: secs(300) },
    Criterion { id: 12, title: "direct limit", suites: &["limit", "multiplicities"], budget: secs(180) },
];

// Written straight to stderr so the lines survive output capture.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let opts = CheckOptions::default();
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let mut problems = Vec::new();
        let mut checked = 0;
        for suite in c.suites {
            let r = run_suite(suite, &opts).expect("known suite");
            checked += r.checked;
            problems.extend(r.failures.iter().take(5).map(|f| format!("{suite}: {f}")));
            if !r.passed && r.failures.is_empty() {
                problems.push(format!("{suite}: failed"));
            }
        }
        let elapsed = start.elapsed();
        if elapsed > c.budget {
            problems.push(format!("took {:.1} s, budget {} s", elapsed.as_secs_f64(), c.budget.as_secs()));
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        report(&format!(
            "criterion {:>2} {:<24} {status}  {checked} checks  {:.2} s / {} s",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        ));
        for p in &problems {
            report(&format!("    {p}"));
        }
        if !problems.is_empty() {
            failed.push(c.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
