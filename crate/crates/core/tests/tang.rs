use posmap::tang::{verify_tang, TangParams, VerifyOptions};

#[test]
fn verify_tang_all_checks_pass() {
    for (mu, eps) in [(0.9, 0.12), (0.3, 0.01), (0.5, 0.5 * 0.5 / 6.0)] {
        let params = TangParams::new(mu, eps).unwrap();
        let start = std::time::Instant::now();
        let report = verify_tang(&params, &VerifyOptions::default()).unwrap();
        let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "({mu}, {eps}) failed: {failed:#?}");
        eprintln!("({mu}, {eps}) verified in {:?}", start.elapsed());
    }
}
