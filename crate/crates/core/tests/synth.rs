use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use radial_core::synth::{
    bayes_classify, clip01, concordance, default_suite, eta_true, generate_trial, run_benchmark,
    SyntheticConfig,
};

#[test]
fn eta_stays_in_unit_interval_on_the_cube() {
    let steps = 41;
    let mut max = 0.0f64;
    for i in 0..steps {
        for j in 0..steps {
            for k in 0..steps {
                let x = [-1.0 + 0.05 * i as f64, -1.0 + 0.05 * j as f64, -1.0 + 0.05 * k as f64];
                let e = eta_true(&x);
                assert!((0.0..=1.0).contains(&e));
                max = max.max(e);
            }
        }
    }
    assert!(max > 0.95);
}

#[test]
fn noisy_label_rate_at_fixed_point() {
    // train labels at x are Bernoulli(clip01(η(x) + ε)); its mean is
    // estimated independently by averaging the clipped noise
    let x = [0.4, 0.5, 0.6];
    let eta = eta_true(&x);
    let noise = Normal::new(0.0, 0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 100_000;
    let expected = (0..n).map(|_| clip01(eta + noise.sample(&mut rng))).sum::<f64>() / n as f64;
    let hits = (0..n)
        .filter(|_| rng.random::<f64>() < clip01(eta + noise.sample(&mut rng)))
        .count() as f64;
    let mean = hits / n as f64;
    let se = (expected * (1.0 - expected) / n as f64).sqrt();
    assert!((mean - expected).abs() < 3.0 * se, "{mean} vs {expected}");
}

#[test]
fn trials_are_seed_deterministic() {
    let cfg = SyntheticConfig {
        n_train: 50,
        n_test: 20,
        ..SyntheticConfig::default()
    };
    let a = generate_trial(&cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let b = generate_trial(&cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    assert_eq!(a.train, b.train);
    assert_eq!(a.test, b.test);
    assert_eq!(a.test_eta, b.test_eta);
    for p in a.train.points() {
        assert!(p.x.values().iter().all(|v| (-1.0..1.0).contains(v)));
    }
    for p in a.test.points() {
        assert!(p.x.values().iter().all(|v| (-0.7..0.7).contains(v)));
    }
}

#[test]
fn train_label_rate_is_in_a_loose_band() {
    let cfg = SyntheticConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let t = generate_trial(&cfg, &mut rng).unwrap();
        let rate = t.train.points().iter().map(|p| f64::from(p.label())).sum::<f64>() / 500.0;
        assert!((0.05..=0.5).contains(&rate), "{rate}");
    }
}

#[test]
fn complement_concordance_sums_to_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let pred: Vec<u8> = (0..37).map(|_| rng.random_range(0..=1)).collect();
        let reference: Vec<u8> = (0..37).map(|_| rng.random_range(0..=1)).collect();
        let flipped: Vec<u8> = pred.iter().map(|p| 1 - p).collect();
        let s = concordance(&pred, &reference).unwrap() + concordance(&flipped, &reference).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
    }
    assert_eq!(bayes_classify(0.5), 1);
}

#[test]
fn single_rep_benchmark_is_reproducible() {
    let cfg = SyntheticConfig {
        n_train: 200,
        n_test: 60,
        reps: 1,
        seed: 5,
        ..SyntheticConfig::default()
    };
    let suite = default_suite();
    let a = run_benchmark(&cfg, &suite).unwrap();
    let b = run_benchmark(&cfg, &suite).unwrap();
    // se is NaN for a single rep, so compare the serialized tables
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(a.rows.len(), 24);
    for r in &a.rows {
        assert!((0.0..=1.0).contains(&r.mean), "{r:?}");
        assert_eq!(r.reps, 1);
    }
    let mut out = Vec::new();
    a.write_csv(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("method,criterion,mean,se,reps,seed\nrandom,labels,"));
}
