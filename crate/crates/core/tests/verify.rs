use k3lines::verify::{cmd_verify_paper, VerifyError, VerifyOptions};

fn only(criteria: &[u8]) -> VerifyOptions {
    VerifyOptions { criteria: criteria.to_vec(), ..VerifyOptions::default() }
}

#[test]
fn report_is_deterministic() {
    let a = cmd_verify_paper(only(&[2, 8])).unwrap().without_timing();
    let b = cmd_verify_paper(only(&[2, 8])).unwrap().without_timing();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.all_pass());
    assert!(a.checks.iter().all(|c| c.seconds == 0.0));
}

#[test]
fn only_requested_criteria_run() {
    let r = cmd_verify_paper(only(&[8])).unwrap();
    assert!(!r.checks.is_empty());
    assert!(r.checks.iter().all(|c| c.criterion == 8));
}

#[test]
fn degenerate_lambda_is_rejected() {
    let opts = VerifyOptions { lambda: 0, ..only(&[1]) };
    assert!(matches!(cmd_verify_paper(opts), Err(VerifyError::DegenerateLambda)));
    let opts = VerifyOptions { lambda: 4, lambda_degree: 2, ..only(&[1]) };
    assert!(matches!(cmd_verify_paper(opts), Err(VerifyError::BadLambda(4, 2))));
}

#[test]
fn bad_cap_is_rejected() {
    for cap in [0, 200] {
        let opts = VerifyOptions { max_degree: cap, ..only(&[1]) };
        assert!(matches!(cmd_verify_paper(opts), Err(VerifyError::BadCap(_))));
    }
}

#[test]
fn small_cap_fails_instead_of_passing() {
    // EX16 needs GF(2^15) and EX20 needs GF(2^18).
    let opts = VerifyOptions { max_degree: 8, ..only(&[3, 4]) };
    let r = cmd_verify_paper(opts).unwrap();
    assert!(!r.checks.is_empty());
    assert!(r.checks.iter().all(|c| !c.pass), "{:#?}", r.checks);
    assert!(r.checks.iter().any(|c| c.computed.contains("FieldTooSmall")));
}
