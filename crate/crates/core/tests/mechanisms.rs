mod common;

use common::{check_counts, check_scalar_mechanism};
use dpkit::mechanisms::{
    exponential_mechanism, gaussian_mechanism, gaussian_sigma, laplace_mechanism, laplace_noise,
    selection_probabilities, BudgetAllocation, PrivacyBudget, SensitivitySpec,
};
use dpkit::{DpError, RandomSource};
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Laplace, Normal};

#[test]
fn laplace_noise_matches_reference_cdf() {
    let scale = 0.7;
    let reference = Laplace::new(0.0, scale).unwrap();
    let mut rng = RandomSource::from_seed(1);
    let n = 50_000;
    let mut draws: Vec<f64> = (0..n).map(|_| laplace_noise(scale, &mut rng)).collect();
    draws.sort_by(|a, b| a.total_cmp(b));
    let ks = draws
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference.cdf(x);
            (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample KS statistic
    assert!(ks < 1.63 / (n as f64).sqrt(), "KS statistic {ks}");
}

#[test]
fn gaussian_sigma_matches_independent_formulas() {
    let adp = PrivacyBudget::approximate(0.5, 1e-5).unwrap();
    let expected = 2.0 * (2.0 * (1.25f64 / 1e-5).ln()).sqrt() / 0.5;
    assert!((gaussian_sigma(&adp, 2.0).unwrap() - expected).abs() < 1e-12);

    let std = Normal::new(0.0, 1.0).unwrap();
    for &(eps, delta) in &[(0.5, 0.01), (1.0, 1e-5), (3.0, 0.1)] {
        let pdp = PrivacyBudget::probabilistic(eps, delta).unwrap();
        let z = std.inverse_cdf(delta / 2.0);
        let expected = ((z * z + 2.0 * eps).sqrt() - z) / (2.0 * eps);
        let got = gaussian_sigma(&pdp, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-7 * expected, "{got} vs {expected}");
    }
}

#[test]
fn approximate_gaussian_needs_epsilon_below_one() {
    assert!(matches!(PrivacyBudget::approximate(1.0, 0.01), Err(DpError::InvalidBudget(_))));
    let b = PrivacyBudget::approximate(0.999, 0.01).unwrap();
    assert!(gaussian_sigma(&b, 1.0).is_ok());
    let p = PrivacyBudget::probabilistic(1.0, 0.01).unwrap();
    assert!(gaussian_sigma(&p, 1.0).is_ok());
}

#[test]
fn pure_mechanisms_reject_delta() {
    let mut rng = RandomSource::from_seed(2);
    let b = PrivacyBudget::approximate(0.5, 0.01).unwrap();
    let s = SensitivitySpec::l1(vec![1.0]).unwrap();
    assert!(laplace_mechanism(&[0.0], &b, &s, None, &mut rng).is_err());
    assert!(exponential_mechanism(&[0.0, 1.0], &b, 1.0, None, &mut rng).is_err());
}

#[test]
fn laplace_default_allocation_uses_summed_sensitivity() {
    // Without an allocation every coordinate gets scale ΣΔ/ε; with an even
    // split the scales become Δᵢ/(ε/2). Compare empirical mean absolute noise.
    let b = PrivacyBudget::pure(1.0).unwrap();
    let s = SensitivitySpec::l1(vec![1.0, 3.0]).unwrap();
    let even = BudgetAllocation::new(vec![0.5, 0.5]).unwrap();
    let mut rng = RandomSource::from_seed(3);
    let n = 40_000;
    let mut default_abs = [0.0; 2];
    let mut split_abs = [0.0; 2];
    for _ in 0..n {
        let d = laplace_mechanism(&[0.0, 0.0], &b, &s, None, &mut rng).unwrap();
        let e = laplace_mechanism(&[0.0, 0.0], &b, &s, Some(&even), &mut rng).unwrap();
        for k in 0..2 {
            default_abs[k] += d[k].abs() / n as f64;
            split_abs[k] += e[k].abs() / n as f64;
        }
    }
    // E|Laplace(b)| = b
    for (got, want) in default_abs.iter().zip([4.0, 4.0]) {
        assert!((got - want).abs() < 0.05 * want, "{got} vs {want}");
    }
    for (got, want) in split_abs.iter().zip([2.0, 6.0]) {
        assert!((got - want).abs() < 0.05 * want, "{got} vs {want}");
    }
}

#[test]
fn gaussian_default_uses_composite_sensitivity() {
    let b = PrivacyBudget::probabilistic(1.0, 0.01).unwrap();
    let s = SensitivitySpec::l2(vec![3.0, 4.0]).unwrap();
    let sigma = gaussian_sigma(&b, 5.0).unwrap();
    let mut rng = RandomSource::from_seed(4);
    let n = 40_000;
    let mut var = [0.0; 2];
    for _ in 0..n {
        let v = gaussian_mechanism(&[0.0, 0.0], &b, &s, None, &mut rng).unwrap();
        var[0] += v[0] * v[0] / n as f64;
        var[1] += v[1] * v[1] / n as f64;
    }
    for v in var {
        assert!((v.sqrt() - sigma).abs() < 0.02 * sigma);
    }
}

#[test]
fn exponential_measure_zero_is_never_selected() {
    let b = PrivacyBudget::pure(2.0).unwrap();
    let mut rng = RandomSource::from_seed(5);
    let m = [1.0, 0.0, 2.0];
    for _ in 0..5000 {
        assert_ne!(exponential_mechanism(&[0.0, 100.0, 0.0], &b, 1.0, Some(&m), &mut rng).unwrap(), 1);
    }
    assert!(selection_probabilities(&[0.0, 1.0], 1.0, 1.0, Some(&[0.0, 0.0])).is_err());
}

#[test]
fn exponential_empirical_dp_on_neighboring_utilities() {
    // Utilities from neighboring datasets differ by at most Δᵤ = 1 per entry.
    let u1 = [0.0, 1.0, 2.0, 1.0, 0.0];
    let u2 = [1.0, 0.0, 2.0, 2.0, 0.0];
    let b = PrivacyBudget::pure(1.0).unwrap();
    let mut r1 = RandomSource::from_seed(6);
    let mut r2 = RandomSource::from_seed(7);
    let mut c1 = vec![0u64; 5];
    let mut c2 = vec![0u64; 5];
    for _ in 0..100_000 {
        c1[exponential_mechanism(&u1, &b, 1.0, None, &mut r1).unwrap()] += 1;
        c2[exponential_mechanism(&u2, &b, 1.0, None, &mut r2).unwrap()] += 1;
    }
    assert!(check_counts(&c1, &c2, 1.0, 0.0).passed());
}

#[test]
fn empirical_check_detects_undercalibrated_noise() {
    // Laplace noise at half the required scale must be flagged.
    let c = check_scalar_mechanism(
        |r| 0.0 + laplace_noise(0.5, r),
        |r| 1.0 + laplace_noise(0.5, r),
        1.0,
        0.0,
        100_000,
        20,
        8,
    );
    assert!(!c.passed(), "excess {}", c.worst_excess);
    let c = check_scalar_mechanism(
        |r| 0.0 + laplace_noise(1.0, r),
        |r| 1.0 + laplace_noise(1.0, r),
        1.0,
        0.0,
        100_000,
        20,
        8,
    );
    assert!(c.passed(), "excess {}", c.worst_excess);
}

proptest! {
    #[test]
    fn huge_epsilon_returns_values(values in prop::collection::vec(-1e3f64..1e3, 1..6), seed in 0u64..1000) {
        let b = PrivacyBudget::pure(1e12).unwrap();
        let s = SensitivitySpec::l1(vec![1.0; values.len()]).unwrap();
        let mut rng = RandomSource::from_seed(seed);
        let out = laplace_mechanism(&values, &b, &s, None, &mut rng).unwrap();
        for (o, v) in out.iter().zip(&values) {
            prop_assert!((o - v).abs() < 1e-6);
        }
    }

    #[test]
    fn probabilities_form_a_distribution(
        u in prop::collection::vec(-50.0f64..50.0, 1..10),
        eps in 0.01f64..20.0,
        sens in 0.1f64..5.0,
    ) {
        let p = selection_probabilities(&u, eps, sens, None).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        // monotone in utility
        for i in 0..u.len() {
            for j in 0..u.len() {
                if u[i] > u[j] {
                    prop_assert!(p[i] >= p[j]);
                }
            }
        }
    }

    #[test]
    fn same_seed_same_release(seed in any::<u64>()) {
        let b = PrivacyBudget::pure(0.3).unwrap();
        let s = SensitivitySpec::l1(vec![2.0, 1.0]).unwrap();
        let a = laplace_mechanism(&[1.0, 2.0], &b, &s, None, &mut RandomSource::from_seed(seed)).unwrap();
        let c = laplace_mechanism(&[1.0, 2.0], &b, &s, None, &mut RandomSource::from_seed(seed)).unwrap();
        prop_assert_eq!(a, c);
    }
}
