use diqss_core::channel::ChannelParams;
use diqss_core::rates::{secret_rate, ProtocolConfig, Strategy, Variant};
use diqss_core::sweep::{table1, Table1Inputs};
use diqss_core::thresholds::{efficiency_threshold, max_distance, noise_tolerance};

fn pair(strategy: Strategy) -> (Variant, Variant) {
    let q = if strategy.noise_preprocessing() {
        0.05
    } else {
        0.0
    };
    let v = Variant::new(strategy).with_flip_probability(q);
    (v, v.with_advantage_distillation(2))
}

#[test]
fn figure_four_thresholds() {
    let (plain, ad) = pair(Strategy::Basic);
    let published = [
        (1.0, 0.963, 0.891),
        (0.99, 0.966, 0.894),
        (0.97, 0.971, 0.901),
        (0.95, 0.976, 0.908),
    ];
    for (f, without, with) in published {
        let t = efficiency_threshold(&plain, f).unwrap();
        assert!((t - without).abs() <= 1e-3, "F={f}: {t}");
        let t = efficiency_threshold(&ad, f).unwrap();
        assert!((t - with).abs() <= 1e-3, "F={f}: {t}");
    }
}

#[test]
fn distillation_helps_everywhere() {
    for strategy in Strategy::ALL {
        let (plain, ad) = pair(strategy);
        for i in 0..=20 {
            let f = 0.9 + 0.005 * i as f64;
            let with = efficiency_threshold(&ad, f).unwrap();
            let without = efficiency_threshold(&plain, f).unwrap();
            assert!(with <= without, "{strategy} F={f}");
            for eta in [0.9, 0.95, 0.98, 1.0] {
                let r = |v: &Variant| {
                    secret_rate(&ProtocolConfig::from_variant(v, f, eta).unwrap())
                        .unwrap()
                        .rate
                };
                assert!(r(&ad) >= r(&plain), "{strategy} F={f} η={eta}");
            }
        }
    }
}

#[test]
fn thresholds_fall_with_fidelity() {
    for v in Variant::table_order(0.05) {
        let mut last = f64::INFINITY;
        for i in 0..=20 {
            let f = 0.9 + 0.005 * i as f64;
            let t = efficiency_threshold(&v, f).unwrap();
            assert!(t <= last + 1e-9, "{} F={f}", v.id());
            last = t;
        }
    }
}

#[test]
fn table_one() {
    let rows = table1(&Table1Inputs::default()).unwrap();
    let rates = [0.234, 0.198, 0.357, 0.283, 0.592, 0.415, 0.576, 0.410];
    let delta = [10.17, 10.80, 7.15, 7.62, 28.49, 28.54, 11.75, 12.30];
    let eta = [96.81, 96.59, 95.63, 95.28, 89.72, 89.70, 92.06, 91.61];
    let km = [0.16, 0.20, 0.46, 0.54, 1.85, 1.85, 1.28, 1.39];
    for (i, row) in rows.iter().enumerate() {
        assert!((row.rate - rates[i]).abs() <= 2e-3, "{row:?}");
        assert!(
            (100.0 * row.delta_threshold - delta[i]).abs() <= 0.05,
            "{row:?}"
        );
        assert!(
            (100.0 * row.eta_threshold - eta[i]).abs() <= 0.05,
            "{row:?}"
        );
        assert!((row.max_distance_km - km[i]).abs() <= 0.01, "{row:?}");
        let tol = noise_tolerance(&row.variant, 0.98).unwrap();
        assert_eq!(tol, row.delta_threshold);
    }
}

#[test]
fn distance_grows_with_fidelity() {
    let params = ChannelParams::default();
    for v in Variant::table_order(0.05) {
        let near = max_distance(&v, 0.999, &params).unwrap();
        let full = max_distance(&v, 1.0, &params).unwrap();
        assert!(near.km <= full.km + 1e-9, "{}", v.id());
    }
}
