use std::time::Duration;

use exclusivity::game::{expected_profit, GameConfig};
use exclusivity::graph::{cycle, intersection_family, random_graph};
use exclusivity::witness::{exhaustive_ratio_scan, witness_analysis, ScanOptions};
use exclusivity::{extract_representation, two_value_representation, witness_report, SubsetFamilySpec, ThetaConfig};
use proptest::prelude::*;

const BUDGET: Duration = Duration::from_secs(30);

#[test]
fn examples() {
    let cfg = ThetaConfig::default();
    let g42 = intersection_family(SubsetFamilySpec::new(4, 2).unwrap()).unwrap();
    let r = witness_report(&g42, &cfg, BUDGET).unwrap();
    assert_eq!((r.alpha.lb, r.alpha.ub), (10, 10));
    assert!((r.theta.ub - 10.0).abs() < 1e-4);
    assert!(!r.is_witness);

    let g31 = intersection_family(SubsetFamilySpec::new(3, 1).unwrap()).unwrap();
    let r = witness_report(&g31, &cfg, BUDGET).unwrap();
    assert!(r.is_witness);
    assert!(r.amc_fraction < 0.1, "far from absolute maximal contextuality: {}", r.amc_fraction);
}

#[test]
fn game_expectation_matches_the_report() {
    let cfg = ThetaConfig::default();
    let c5 = cycle(5).unwrap();
    let a = witness_analysis(&c5, &cfg, BUDGET).unwrap();
    let rep = extract_representation(&c5, &a.theta).unwrap();
    let game = GameConfig::uniform(rep.probabilities, a.report.alpha.ub as f64, 0.0, 1, 0);
    let gap = a.report.ratio.ub - a.report.ratio.lb;
    assert!((expected_profit(&game).unwrap() - a.report.predicted_profit).abs() <= gap + 1e-9);

    let spec = SubsetFamilySpec::new(3, 1).unwrap();
    let g = intersection_family(spec).unwrap();
    let a = witness_analysis(&g, &cfg, BUDGET).unwrap();
    let rep = two_value_representation(spec).unwrap();
    let game = GameConfig::uniform(rep.probabilities, a.report.alpha.ub as f64, 0.0, 1, 0);
    let gap = a.report.ratio.ub - a.report.ratio.lb;
    assert!((expected_profit(&game).unwrap() - a.report.predicted_profit).abs() <= gap + 1e-9);
    assert!((expected_profit(&game).unwrap() - 0.25).abs() < 1e-9);
}

#[test]
fn scan_is_deterministic() {
    let cfg = ThetaConfig::default();
    let a = exhaustive_ratio_scan(5, &cfg, &ScanOptions::default()).unwrap();
    let b = exhaustive_ratio_scan(5, &cfg, &ScanOptions { workers: 4, allow_long_run: false }).unwrap();
    assert_eq!(a.argmax, b.argmax);
    assert_eq!(a.rows, b.rows);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn report_invariants(n in 1usize..13, p in 0.0f64..=1.0, seed: u64, budget_ms in 0u64..3) {
        let g = random_graph(n, p, seed).unwrap();
        let r = witness_report(&g, &ThetaConfig::default(), Duration::from_millis(budget_ms)).unwrap();
        prop_assert!(r.ratio.lb <= r.ratio.ub);
        prop_assert!(r.amc_fraction > 0.0 && r.amc_fraction <= 1.0 + 1e-9);
        prop_assert!(r.alpha.lb as f64 <= r.theta.ub + 1e-6);
        prop_assert!(r.alpha.lb <= r.alpha.ub);
        if r.is_witness {
            prop_assert!(r.theta.lb > r.alpha.ub as f64);
        }
    }
}
