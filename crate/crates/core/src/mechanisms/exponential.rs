use crate::mechanisms::{DpVariant, PrivacyBudget};
use crate::{DpError, RandomSource, Result};

fn validate(utility: &[f64], sens_u: f64, measure: Option<&[f64]>) -> Result<()> {
    if utility.is_empty() {
        return Err(DpError::input("utility vector is empty"));
    }
    if utility.iter().any(|u| !u.is_finite()) {
        return Err(DpError::input("utilities must be finite"));
    }
    if !(sens_u >= 0.0) || !sens_u.is_finite() {
        return Err(DpError::InvalidSensitivity(format!(
            "utility sensitivity must be finite and nonnegative, got {sens_u}"
        )));
    }
    if let Some(m) = measure {
        if m.len() != utility.len() {
            return Err(DpError::dims(format!(
                "{} utilities but {} measure weights",
                utility.len(),
                m.len()
            )));
        }
        if m.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(DpError::input("measure weights must be finite and nonnegative"));
        }
        if m.iter().all(|w| *w == 0.0) {
            return Err(DpError::input("measure weights are all zero"));
        }
    }
    Ok(())
}

/// Unnormalized selection weights, shifted so the largest is 1.
fn shifted_weights(utility: &[f64], epsilon: f64, sens_u: f64, measure: Option<&[f64]>) -> Vec<f64> {
    let weight_of = |i: usize| measure.map_or(1.0, |m| m[i]);
    if sens_u == 0.0 {
        // Data-independent utility: the mechanism degenerates to the argmax set.
        let best = utility
            .iter()
            .enumerate()
            .filter(|(i, _)| weight_of(*i) > 0.0)
            .map(|(_, u)| *u)
            .fold(f64::NEG_INFINITY, f64::max);
        return (0..utility.len())
            .map(|i| if utility[i] == best { weight_of(i) } else { 0.0 })
            .collect();
    }
    let log_w: Vec<f64> = utility
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let w = weight_of(i);
            if w == 0.0 {
                f64::NEG_INFINITY
            } else {
                epsilon * u / (2.0 * sens_u) + w.ln()
            }
        })
        .collect();
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    log_w.iter().map(|lw| (lw - max).exp()).collect()
}

/// Closed-form selection probabilities of the exponential mechanism.
pub fn selection_probabilities(
    utility: &[f64],
    epsilon: f64,
    sens_u: f64,
    measure: Option<&[f64]>,
) -> Result<Vec<f64>> {
    validate(utility, sens_u, measure)?;
    let w = shifted_weights(utility, epsilon, sens_u, measure);
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Selects an index with probability ∝ measureᵢ·exp(ε·uᵢ/(2Δᵤ)).
///
/// Sampling walks the cumulative weights and returns the first index whose
/// cumulative weight reaches `u·total`.
pub fn exponential_mechanism(
    utility: &[f64],
    budget: &PrivacyBudget,
    sens_u: f64,
    measure: Option<&[f64]>,
    rng: &mut RandomSource,
) -> Result<usize> {
    if budget.variant() != DpVariant::Pure {
        return Err(DpError::InvalidBudget(
            "the exponential mechanism provides pure DP; use delta = 0".into(),
        ));
    }
    validate(utility, sens_u, measure)?;
    let w = shifted_weights(utility, budget.epsilon(), sens_u, measure);
    let total: f64 = w.iter().sum();
    let target = rng.uniform() * total;
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, wi) in w.iter().enumerate() {
        if *wi > 0.0 {
            last_positive = i;
        }
        cumulative += wi;
        if *wi > 0.0 && cumulative >= target {
            return Ok(i);
        }
    }
    // Rounding can leave the running sum a hair below `target`.
    Ok(last_positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_probability_fixture() {
        let p = selection_probabilities(&[0.0, 1.0, 2.0, 1.0, 0.0], 1.0, 1.0, None).unwrap();
        let e = std::f64::consts::E;
        let expected = e / (2.0 + 2.0 * e.sqrt() + e);
        assert!((p[2] - expected).abs() < 1e-15);
        assert!((p[2] - 0.3391).abs() < 1e-4);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_utility_follows_measure() {
        let m = [1.0, 3.0, 0.0, 4.0];
        let p = selection_probabilities(&[2.0; 4], 0.7, 1.0, Some(&m)).unwrap();
        for (got, want) in p.iter().zip([0.125, 0.375, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn huge_epsilon_concentrates_on_argmax() {
        let b = PrivacyBudget::pure(1e9).unwrap();
        let mut rng = RandomSource::from_seed(5);
        for _ in 0..200 {
            let i = exponential_mechanism(&[0.0, 3.0, 1.0], &b, 1.0, None, &mut rng).unwrap();
            assert_eq!(i, 1);
        }
    }

    #[test]
    fn wide_utility_range_is_stable() {
        let b = PrivacyBudget::pure(1.0).unwrap();
        let mut rng = RandomSource::from_seed(8);
        let u = [-1e6, 1e6, 0.0, 999_999.0];
        for _ in 0..100 {
            let i = exponential_mechanism(&u, &b, 1.0, None, &mut rng).unwrap();
            assert!(i < u.len());
        }
        let p = selection_probabilities(&u, 1.0, 1.0, None).unwrap();
        assert!(p.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn zero_measure_never_selected() {
        let b = PrivacyBudget::pure(1.0).unwrap();
        let mut rng = RandomSource::from_seed(2);
        for _ in 0..1000 {
            let i = exponential_mechanism(&[5.0, 0.0, 0.0], &b, 1.0, Some(&[0.0, 1.0, 1.0]), &mut rng)
                .unwrap();
            assert_ne!(i, 0);
        }
    }

    #[test]
    fn errors() {
        let b = PrivacyBudget::pure(1.0).unwrap();
        let mut rng = RandomSource::from_seed(2);
        assert!(exponential_mechanism(&[], &b, 1.0, None, &mut rng).is_err());
        assert!(exponential_mechanism(&[1.0], &b, -1.0, None, &mut rng).is_err());
        assert!(exponential_mechanism(&[1.0, 2.0], &b, 1.0, Some(&[0.0, 0.0]), &mut rng).is_err());
    }
}
