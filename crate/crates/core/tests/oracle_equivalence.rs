use diqss_core::outcome_model::{
    apply_post_selection, oracle_ad, oracle_qber, outcome_distribution, OutcomeDistribution,
};
use diqss_core::rates::{advantage_filter, apply_flip, distilled_qber, raw_qber};
use diqss_core::Error;

const GRID: [f64; 8] = [0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.98, 1.0];
const TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

#[test]
fn distributions_are_normalised() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = outcome_distribution(f, eta).unwrap();
            assert!(d.probs().iter().all(|&p| p >= 0.0));
            assert!((d.total() - 1.0).abs() < TOL);
            for party in 0..3 {
                assert!((d.click_probability(party).unwrap() - eta).abs() < TOL);
            }
            let ps = apply_post_selection(&d).unwrap();
            assert!((ps.total() - d.total()).abs() < 1e-15);
        }
    }
}

#[test]
fn loss_inclusive_qber() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = outcome_distribution(f, eta).unwrap();
            let oracle = oracle_qber(&d, 0.0, false).unwrap();
            let closed = raw_qber(f, eta, false).unwrap();
            assert!(close(oracle, closed), "F={f} η={eta}: {oracle} vs {closed}");
        }
    }
}

#[test]
fn post_selected_qber() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = apply_post_selection(&outcome_distribution(f, eta).unwrap()).unwrap();
            let oracle = oracle_qber(&d, 0.0, false).unwrap();
            let closed = raw_qber(f, eta, true).unwrap();
            assert!(close(oracle, closed), "F={f} η={eta}: {oracle} vs {closed}");
        }
    }
}

#[test]
fn click_conditional_qber_with_flip() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = outcome_distribution(f, eta).unwrap();
            for q in [0.0, 0.05, 0.2, 0.5] {
                let oracle = oracle_qber(&d, q, true);
                if eta == 0.0 {
                    assert_eq!(oracle, Err(Error::NullEvent));
                    continue;
                }
                let closed = apply_flip(q, (1.0 - f) / 2.0);
                assert!(close(oracle.unwrap(), closed), "F={f} η={eta} q={q}");
            }
        }
    }
}

#[test]
fn basic_distillation() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = outcome_distribution(f, eta).unwrap();
            let oracle = oracle_ad(&d, 0.0, 2, true);
            if eta == 0.0 {
                assert_eq!(oracle, Err(Error::NullEvent));
                continue;
            }
            let oracle = oracle.unwrap();
            let closed = distilled_qber(f, eta, false, 2).unwrap();
            assert!(close(oracle.retention, closed.retention), "F={f} η={eta}");
            assert!(close(oracle.qber, closed.qber), "F={f} η={eta}");
        }
    }
}

#[test]
fn post_selected_distillation() {
    for &f in &GRID {
        for &eta in &GRID {
            let d = apply_post_selection(&outcome_distribution(f, eta).unwrap()).unwrap();
            let oracle = oracle_ad(&d, 0.0, 2, false).unwrap();
            let closed = distilled_qber(f, eta, true, 2).unwrap();
            let delta_p = raw_qber(f, eta, true).unwrap();
            let retention = (1.0 - delta_p) * (1.0 - delta_p) + delta_p * delta_p;
            assert!(close(oracle.qber, closed.qber), "F={f} η={eta}");
            assert!(close(oracle.retention, closed.retention));
            assert!(close(oracle.retention, retention));
        }
    }
}

#[test]
fn flipped_distillation_longer_blocks() {
    for &(f, eta) in &[(0.98, 0.98), (0.95, 0.9), (0.9, 1.0)] {
        let three = outcome_distribution(f, eta).unwrap();
        let ps = apply_post_selection(&three).unwrap();
        for n in 1..=3 {
            for q in [0.0, 0.05, 0.3] {
                let o = oracle_ad(&ps, q, n, false).unwrap();
                let c = advantage_filter(apply_flip(q, raw_qber(f, eta, true).unwrap()), n);
                assert!(close(o.qber, c.qber) && close(o.retention, c.retention));

                let o = oracle_ad(&three, q, n, true).unwrap();
                let mut c = advantage_filter(apply_flip(q, (1.0 - f) / 2.0), n);
                c.retention *= eta.powi(3 * n as i32);
                assert!(close(o.qber, c.qber) && close(o.retention, c.retention));
            }
        }
    }
}

#[test]
fn worked_examples() {
    let d = outcome_distribution(0.98, 1.0).unwrap();
    let o = oracle_ad(&d, 0.0, 2, true).unwrap();
    assert!((o.retention - 0.9802).abs() < 1e-12);
    assert!((o.qber - 1.0e-4 / 0.9802).abs() < 1e-12);

    let d = apply_post_selection(&outcome_distribution(1.0, 0.9).unwrap()).unwrap();
    assert!((oracle_qber(&d, 0.0, false).unwrap() - 0.135).abs() < 1e-12);

    let d = apply_post_selection(&outcome_distribution(0.98, 0.9206).unwrap()).unwrap();
    assert!((oracle_qber(&d, 0.0, false).unwrap() - 0.1174).abs() < 1e-4);
}

#[test]
fn mode_and_size_errors() {
    let three = outcome_distribution(0.9, 0.9).unwrap();
    let binary = apply_post_selection(&three).unwrap();
    assert!(matches!(binary, OutcomeDistribution::Binary(_)));
    assert!(apply_post_selection(&binary).is_err());
    assert!(oracle_qber(&binary, 0.0, true).is_err());
    assert!(oracle_ad(&three, 0.0, 2, false).is_err());
    assert!(oracle_ad(&binary, 0.0, 2, true).is_err());
    assert_eq!(
        oracle_ad(&binary, 0.0, 5, false),
        Err(Error::EnumerationTooLarge(5))
    );
    assert!(oracle_ad(&binary, 0.0, 0, false).is_err());
    assert!(oracle_qber(&binary, 0.6, false).is_err());
}
