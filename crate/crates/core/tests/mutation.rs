use cablefloer::filtration::StaircaseRule;
use cablefloer::verify::{run_suite, Suite, VerifyConfig};

#[test]
fn swapped_staircase_parity_fails_the_suite() {
    let config = VerifyConfig { staircase_rule: StaircaseRule::SwappedParity };
    let outcomes = run_suite(Suite::All, &config);
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(!failed.is_empty());
    // criteria that never build a staircase are unaffected
    for o in outcomes.iter().filter(|o| [1, 7, 8, 9, 10].contains(&o.id)) {
        assert!(o.passed, "{o}");
    }
}

#[test]
fn standard_rule_passes_every_suite() {
    for name in Suite::NAMES {
        let suite: Suite = name.parse().unwrap();
        for o in run_suite(suite, &VerifyConfig::default()) {
            assert!(o.passed, "{name}: {o}");
        }
    }
}
