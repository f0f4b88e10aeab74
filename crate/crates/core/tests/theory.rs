mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_core::theory::{
    design_state, example1_constants, lrr_closed_form, moment_check, rate_experiment, theory_lrr,
    zeta_concentration, RateConfig, TheoryConfig, ZetaBasis,
};
use radial_core::NeighborProfile;

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<u8>, usize)> {
    (5usize..120, 1usize..=2).prop_flat_map(|(n, omega)| {
        (
            prop::collection::vec(0.0f64..1.0, n),
            prop::collection::vec(0u8..=1, n),
            Just(omega),
        )
    })
}

fn sorted_profile(mut radii: Vec<f64>, labels: Vec<u8>) -> NeighborProfile {
    radii.sort_by(f64::total_cmp);
    NeighborProfile::from_radii(radii, labels).unwrap()
}

proptest! {
    #[test]
    fn rho_identities((radii, labels, omega) in instance(), b in prop::collection::vec(-3.0f64..3.0, 2)) {
        let p = sorted_profile(radii, labels);
        let cfg = TheoryConfig::new(5.0, 2, 1.0, omega, 0.99).unwrap();
        let s = design_state(&p, &cfg);
        let zeta = s.zeta.unwrap();
        prop_assert!(zeta >= -1e-9 && zeta <= s.n as f64 * (1.0 + 1e-12));
        if s.event_holds {
            let sum: f64 = s.rho.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
            let rb = &s.r_matrix * nalgebra::DVector::from_column_slice(&b[..omega]);
            let dot: f64 = s.rho.iter().zip(rb.iter()).map(|(a, c)| a * c).sum();
            prop_assert!(dot.abs() < 1e-9, "⟨ρ, Rb⟩ = {}", dot);
            let norm2: f64 = s.rho.iter().map(|r| r * r).sum();
            prop_assert!((norm2 - 1.0 / (s.n as f64 - zeta)).abs() < 1e-9);
        } else {
            prop_assert!(s.rho.is_empty());
        }
    }

    #[test]
    fn closed_form_is_intercept_of_normal_equations((radii, labels, omega) in instance()) {
        let p = sorted_profile(radii, labels);
        let cfg = TheoryConfig::new(5.0, 2, 1.0, omega, 0.99).unwrap();
        let s = design_state(&p, &cfg);
        prop_assume!(s.event_holds);
        let rows: Vec<Vec<f64>> = p.radii().iter().map(|r| (0..=omega).map(|c| r.powi(2 * c as i32)).collect()).collect();
        let y: Vec<f64> = p.labels().iter().map(|&v| f64::from(v)).collect();
        let oracle = common::wls_normal(&rows, &y, &vec![1.0; y.len()])[0];
        let closed = lrr_closed_form(&s, p.labels()).unwrap();
        prop_assert!((closed - oracle).abs() < 1e-7, "{} vs {}", closed, oracle);
        prop_assert!((theory_lrr(&p, &cfg).unwrap() - closed).abs() < 1e-8);
    }
}

#[test]
fn constant_labels_reproduce_constant() {
    let p = sorted_profile(vec![0.1, 0.3, 0.5, 0.6, 0.95], vec![1; 5]);
    let cfg = TheoryConfig::new(3.0, 1, 1.0, 1, 0.9).unwrap();
    assert!((theory_lrr(&p, &cfg).unwrap() - 1.0).abs() < 1e-10);
}

/// Uniform draw in the d-ball by rejection from the enclosing cube.
fn ball_point(rng: &mut ChaCha8Rng, d: usize, r: f64) -> f64 {
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-r..r)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= r {
            return norm;
        }
    }
}

#[test]
fn moments_match_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (d, k, r) in [(1, 1, 1.0), (2, 1, 1.0), (2, 2, 0.5), (3, 1, 1.5), (3, 4, 1.0)] {
        let n = 40_000;
        let xs: Vec<f64> = (0..n).map(|_| ball_point(&mut rng, d, r).powi(k as i32)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)).sqrt();
        let se = sd / (n as f64).sqrt();
        let exact = moment_check(d, k, r);
        assert!((mean - exact).abs() < 3.0 * se, "d={d} k={k}: {mean} vs {exact}");
    }
}

#[test]
fn zeta_ratio_concentrates_on_uniform_ball_limits() {
    for d in [1usize, 2] {
        let t = zeta_concentration(d, 1.0, &[1, 2000], 50, 4, ZetaBasis::Linear).unwrap();
        assert_eq!(t.rows[0].mean, 1.0);
        let target = example1_constants(d).rho_star;
        assert!((t.rows[1].mean - target).abs() < 0.02, "d={d}: {}", t.rows[1].mean);
        // r² column: E(r²)²/E(r⁴) = 1 − 4/(d+2)²
        let t = zeta_concentration(d, 1.0, &[2000], 50, 4, ZetaBasis::Even).unwrap();
        let even = 1.0 - 4.0 / ((d + 2) * (d + 2)) as f64;
        assert!((t.rows[0].mean - even).abs() < 0.02);
    }
}

#[test]
fn rate_with_constant_eta_shrinks() {
    let mut cfg = RateConfig::new(2.0, 1, vec![100, 400, 1600], 2);
    cfg.reps = 60;
    let rep = rate_experiment(&cfg, |_| 0.5).unwrap();
    assert!(rep.risks.iter().all(|&r| r > 0.0));
    assert!(rep.risks[0] > rep.risks[1] && rep.risks[1] > rep.risks[2]);
    assert!(rep.fitted_slope < 0.0);
}

#[test]
fn rate_experiment_is_reproducible() {
    let mut cfg = RateConfig::new(2.0, 1, vec![100, 200, 400], 17);
    cfg.reps = 30;
    let a = rate_experiment(&cfg, radial_core::theory::default_eta).unwrap();
    let b = rate_experiment(&cfg, radial_core::theory::default_eta).unwrap();
    assert_eq!(a, b);
    let mut csv = Vec::new();
    a.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("n,risk_mean,risk_se\n100,"));
}
