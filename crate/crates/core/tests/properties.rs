use diqss_core::channel::{distance_for_efficiency, global_efficiency, ChannelParams};
use diqss_core::distill::{ad_decision, mask_block};
use diqss_core::outcome_model::{noisy_state, svetlichny_polynomial};
use diqss_core::rates::{
    binary_entropy, effective_qber, secret_rate, ProtocolConfig, Strategy, Variant,
};
use proptest::prelude::*;

fn config(strategy: Strategy, ad: bool, q: f64, f: f64, eta: f64) -> ProtocolConfig {
    let mut v = Variant::new(strategy).with_flip_probability(q);
    if ad {
        v = v.with_advantage_distillation(2);
    }
    ProtocolConfig::from_variant(&v, f, eta).unwrap()
}

fn grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| i as f64 / (points - 1) as f64)
}

proptest! {
    #[test]
    fn entropy_is_symmetric(x in 0.0..=1.0f64) {
        let a = binary_entropy(x).unwrap();
        let b = binary_entropy(1.0 - x).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn mask_invariance(
        block in prop::collection::vec(any::<(bool, bool, bool)>(), 1..16),
        r: bool,
        t: bool,
    ) {
        let a: Vec<bool> = block.iter().map(|x| x.0).collect();
        let b: Vec<bool> = block.iter().map(|x| x.1).collect();
        let c: Vec<bool> = block.iter().map(|x| x.2).collect();
        prop_assert_eq!(
            ad_decision(&a, &mask_block(&b, r), &mask_block(&c, t)).unwrap(),
            ad_decision(&a, &b, &c).unwrap()
        );
    }

    #[test]
    fn flip_never_lowers_qber(
        f in 0.0..=1.0f64,
        eta in 0.0..=1.0f64,
        q in 0.0..=0.5f64,
        ps: bool,
        ad: bool,
    ) {
        let strategy = Strategy::from_flags(true, ps);
        let c = config(strategy, ad, q, f, eta);
        let e = effective_qber(&c).unwrap();
        prop_assert!(e >= q - 1e-15);
        prop_assert!(e <= 1.0 - q + 1e-15);
    }

    #[test]
    fn rates_are_bounded(
        f in 0.0..=1.0f64,
        eta in 0.0..=1.0f64,
        q in 0.0..=0.5f64,
        np: bool,
        ps: bool,
        ad: bool,
    ) {
        let c = config(Strategy::from_flags(np, ps), ad, if np { q } else { 0.0 }, f, eta);
        let r = secret_rate(&c).unwrap();
        prop_assert!(r.rate >= 0.0 && r.rate <= 1.0);
        prop_assert!(r.s_value >= 0.0 && r.s_value <= 2.0 * std::f64::consts::SQRT_2 + 1e-12);
    }

    #[test]
    fn svetlichny_is_linear(f in 0.0..=1.0f64) {
        let s = svetlichny_polynomial(f).unwrap();
        prop_assert!((s - 4.0 * std::f64::consts::SQRT_2 * f).abs() < 1e-10);
    }

    #[test]
    fn distance_roundtrip(d in 0.0..200.0f64) {
        let p = ChannelParams::default();
        let eta = global_efficiency(d, &p).unwrap();
        prop_assert!((distance_for_efficiency(eta, &p).unwrap() - d).abs() < 1e-9);
    }
}

#[test]
fn zero_flip_is_basic() {
    for f in grid(50) {
        for eta in grid(50) {
            for ad in [false, true] {
                let basic = secret_rate(&config(Strategy::Basic, ad, 0.0, f, eta)).unwrap();
                let np =
                    secret_rate(&config(Strategy::NoisePreprocessing, ad, 0.0, f, eta)).unwrap();
                assert_eq!(
                    basic.rate.to_bits(),
                    np.rate.to_bits(),
                    "F={f} η={eta} ad={ad}"
                );
                let ps = secret_rate(&config(Strategy::PostSelection, ad, 0.0, f, eta)).unwrap();
                let nps = secret_rate(&config(Strategy::Combined, ad, 0.0, f, eta)).unwrap();
                assert_eq!(ps.rate.to_bits(), nps.rate.to_bits());
            }
        }
    }
}

#[test]
fn post_selection_is_basic_at_unit_efficiency() {
    for f in grid(101) {
        for ad in [false, true] {
            for q in [0.0, 0.05, 0.25] {
                let np = Strategy::NoisePreprocessing;
                let basic = secret_rate(&config(np, ad, q, f, 1.0)).unwrap();
                let ps = secret_rate(&config(Strategy::Combined, ad, q, f, 1.0)).unwrap();
                assert!((basic.rate - ps.rate).abs() < 1e-12, "F={f}");
                assert!((basic.effective_qber - ps.effective_qber).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn monotone_in_fidelity_and_efficiency() {
    let points: Vec<f64> = grid(100).collect();
    for v in Variant::table_order(0.05) {
        let rate = |f: f64, eta: f64| {
            secret_rate(&ProtocolConfig::from_variant(&v, f, eta).unwrap())
                .unwrap()
                .rate
        };
        for &f in &points {
            let mut last = 0.0;
            for &eta in &points {
                let r = rate(f, eta);
                assert!(r >= last - 1e-12, "{} F={f} η={eta}", v.id());
                last = r;
            }
        }
        for &eta in &points {
            let mut last = 0.0;
            for &f in &points {
                let r = rate(f, eta);
                assert!(r >= last - 1e-12, "{} F={f} η={eta}", v.id());
                last = r;
            }
        }
    }
}

#[test]
fn density_matrix_invariants() {
    for f in grid(21) {
        let rho = noisy_state(f).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(rho.is_hermitian(1e-12));
        assert!(rho.eigenvalues().iter().all(|&l| l >= -1e-10));
    }
    let s = svetlichny_polynomial(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    assert!((s - 4.0).abs() < 1e-12);
}
