use std::io::Write;

use k3lines::verify::{cmd_verify_paper, VerifyOptions};

const CRITERIA: [&str; 10] = [
    "68 lines on X, 4 cuspidal in x0 = 0, 64 special of valency 19",
    "unique A3 point and C1 plane on X",
    "EX16 line of the first kind with 16 meeting lines",
    "EX20 cuspidal line meeting 19 lines through an A2 point",
    "EX12 line of the second kind with 12 meeting lines",
    "resultant factorization on random surfaces",
    "Riemann-Hurwitz count of meeting lines",
    "fiber tallies and rank filter",
    "C1 surfaces normalize to family X",
    "intersection graph bounds",
];

/// Bypasses libtest output capture so the summary shows in every run.
fn say(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance() {
    let report = cmd_verify_paper(VerifyOptions::default()).expect("default options are valid");
    let summary = report.criteria();
    let mut failed = Vec::new();
    for (id, desc) in (1u8..).zip(CRITERIA) {
        let (pass, secs) = match summary.iter().find(|(c, _, _)| *c == id) {
            Some(&(_, pass, secs)) => (pass, secs),
            None => (false, 0.0),
        };
        say(format!("criterion {id}: {} ({desc}; {secs:.1}s)", if pass { "PASS" } else { "FAIL" }));
        if !pass {
            failed.push(id);
            for c in report.checks.iter().filter(|c| c.criterion == id && !c.pass) {
                say(format!("    {}: expected {}, computed {}", c.name, c.expected, c.computed));
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
