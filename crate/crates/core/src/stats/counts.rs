use serde::{Deserialize, Serialize};

use crate::mechanisms::{NeighborModel, Norm};
use crate::stats::request::{perturb, MechanismKind, Release, ReleaseMeta, StatRequest};
use crate::{DpError, RandomSource, Result};

/// Global sensitivity of a vector of counts. Modifying a record moves one
/// unit between two cells; adding or removing one touches a single cell.
pub fn histogram_sensitivity(norm: Norm, neighbor: NeighborModel) -> f64 {
    match (norm, neighbor) {
        (Norm::L1, NeighborModel::Bounded) => 2.0,
        (Norm::L2, NeighborModel::Bounded) => std::f64::consts::SQRT_2,
        (_, NeighborModel::Unbounded) => 1.0,
    }
}

fn count_sensitivity(mechanism: MechanismKind, neighbor: NeighborModel) -> f64 {
    let norm = match mechanism {
        MechanismKind::Laplace => Norm::L1,
        MechanismKind::Gaussian => Norm::L2,
    };
    histogram_sensitivity(norm, neighbor)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Breaks {
    /// Explicit ascending bin edges.
    Edges(Vec<f64>),
    /// `bins` equal-width bins over the public range `[lower, upper]`.
    Count { bins: usize, lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub breaks: Breaks,
    pub normalize: bool,
    pub allow_negative: bool,
}

impl HistogramSpec {
    pub fn edges(&self) -> Result<Vec<f64>> {
        let edges = match &self.breaks {
            Breaks::Edges(e) => e.clone(),
            Breaks::Count { bins, lower, upper } => {
                if *bins == 0 {
                    return Err(DpError::input("histogram needs at least one bin"));
                }
                if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
                    return Err(DpError::InvalidBounds(format!(
                        "histogram range [{lower}, {upper}] is invalid"
                    )));
                }
                let width = (upper - lower) / *bins as f64;
                let mut e: Vec<f64> = (0..*bins).map(|i| lower + width * i as f64).collect();
                e.push(*upper);
                e
            }
        };
        if edges.len() < 2 {
            return Err(DpError::input("histogram needs at least two edges"));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(DpError::input("histogram edges must be finite and strictly ascending"));
        }
        Ok(edges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    /// Counts, or densities when `normalized` is set.
    pub values: Vec<f64>,
    pub normalized: bool,
}

/// Right-closed bins (a, b] with the first bin closed on both sides; values
/// outside the edges land in the end bins.
fn bin_counts(x: &[f64], edges: &[f64]) -> Vec<f64> {
    let bins = edges.len() - 1;
    let mut counts = vec![0.0; bins];
    for &v in x {
        // index of the first edge >= v, minus one
        let pos = edges.partition_point(|e| *e < v);
        let bin = pos.saturating_sub(1).min(bins - 1);
        counts[bin] += 1.0;
    }
    counts
}

fn floor_counts(values: &mut [f64], allow_negative: bool) {
    if !allow_negative {
        for v in values.iter_mut() {
            *v = v.max(0.0);
        }
    }
}

/// Private histogram of `x`.
pub fn histogram_dp(
    x: &[f64],
    spec: &HistogramSpec,
    req: &StatRequest,
    rng: &mut RandomSource,
) -> Result<Vec<Release<Histogram>>> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(DpError::input("input contains NaN"));
    }
    let edges = spec.edges()?;
    let counts = bin_counts(x, &edges);
    req.neighbor
        .models()
        .into_iter()
        .map(|nb| {
            let sens = count_sensitivity(req.mechanism, nb);
            let mut values = perturb(&counts, sens, req, rng)?;
            floor_counts(&mut values, spec.allow_negative);
            if spec.normalize {
                let total: f64 = values.iter().sum();
                for (v, w) in values.iter_mut().zip(edges.windows(2)) {
                    *v = if total > 0.0 { *v / (total * (w[1] - w[0])) } else { 0.0 };
                }
            }
            Ok(Release {
                value: Histogram {
                    edges: edges.clone(),
                    values,
                    normalized: spec.normalize,
                },
                meta: ReleaseMeta::new("histogram", sens, nb, req),
            })
        })
        .collect()
}

/// A categorical variable with its declared level set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub values: Vec<String>,
    pub levels: Vec<String>,
}

impl Factor {
    pub fn new(values: Vec<String>, levels: Vec<String>) -> Result<Self> {
        if levels.is_empty() {
            return Err(DpError::input("a factor needs at least one level"));
        }
        Ok(Self { values, levels })
    }
}

/// Multiway table, stored row-major: the last factor varies fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub levels: Vec<Vec<String>>,
    pub counts: Vec<f64>,
}

impl ContingencyTable {
    /// Count at one level index per factor.
    pub fn get(&self, index: &[usize]) -> f64 {
        let mut flat = 0;
        for (i, lv) in index.iter().zip(&self.levels) {
            flat = flat * lv.len() + i;
        }
        self.counts[flat]
    }
}

/// Private cross-tabulation; every combination of declared levels appears as
/// a cell, including empty ones.
pub fn table_dp(
    factors: &[Factor],
    req: &StatRequest,
    allow_negative: bool,
    rng: &mut RandomSource,
) -> Result<Vec<Release<ContingencyTable>>> {
    if factors.is_empty() {
        return Err(DpError::input("table needs at least one factor"));
    }
    let n = factors[0].values.len();
    if factors.iter().any(|f| f.values.len() != n) {
        return Err(DpError::dims("factors differ in length"));
    }
    let cells: usize = factors.iter().map(|f| f.levels.len()).product();
    let mut counts = vec![0.0; cells];
    for row in 0..n {
        let mut flat = 0;
        for f in factors {
            let v = &f.values[row];
            let i = f.levels.iter().position(|l| l == v).ok_or_else(|| {
                DpError::input(format!("unknown category label '{v}'"))
            })?;
            flat = flat * f.levels.len() + i;
        }
        counts[flat] += 1.0;
    }
    let levels: Vec<Vec<String>> = factors.iter().map(|f| f.levels.clone()).collect();
    req.neighbor
        .models()
        .into_iter()
        .map(|nb| {
            let sens = count_sensitivity(req.mechanism, nb);
            let mut values = perturb(&counts, sens, req, rng)?;
            floor_counts(&mut values, allow_negative);
            Ok(Release {
                value: ContingencyTable {
                    levels: levels.clone(),
                    counts: values,
                },
                meta: ReleaseMeta::new("table", sens, nb, req),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::NeighborChoice;

    #[test]
    fn sensitivity_fixtures() {
        assert_eq!(histogram_sensitivity(Norm::L1, NeighborModel::Bounded), 2.0);
        assert_eq!(histogram_sensitivity(Norm::L1, NeighborModel::Unbounded), 1.0);
        assert_eq!(histogram_sensitivity(Norm::L2, NeighborModel::Unbounded), 1.0);
    }

    #[test]
    fn binning_is_right_closed_and_clamps() {
        let edges = [0.0, 1.0, 2.0, 3.0];
        let c = bin_counts(&[0.0, 0.5, 1.0, 1.5, 3.0, -4.0, 9.0], &edges);
        assert_eq!(c, vec![4.0, 1.0, 2.0]);
    }

    #[test]
    fn huge_epsilon_gives_exact_counts() {
        let spec = HistogramSpec {
            breaks: Breaks::Edges(vec![0.0, 1.0, 2.0, 3.0]),
            normalize: false,
            allow_negative: false,
        };
        let req = StatRequest::laplace(1e9).unwrap();
        let mut rng = RandomSource::from_seed(1);
        let h = histogram_dp(&[0.2, 0.4, 2.5], &spec, &req, &mut rng).unwrap();
        for (got, want) in h[0].value.values.iter().zip([2.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn negative_counts_are_floored() {
        let spec = HistogramSpec {
            breaks: Breaks::Count { bins: 10, lower: 0.0, upper: 1.0 },
            normalize: false,
            allow_negative: false,
        };
        let req = StatRequest::laplace(0.1).unwrap();
        let mut rng = RandomSource::from_seed(12);
        let h = histogram_dp(&[0.5], &spec, &req, &mut rng).unwrap();
        assert!(h[0].value.values.iter().all(|v| *v >= 0.0));
        let spec_neg = HistogramSpec { allow_negative: true, ..spec };
        let mut rng = RandomSource::from_seed(12);
        let h = histogram_dp(&[0.5], &spec_neg, &req, &mut rng).unwrap();
        assert!(h[0].value.values.iter().any(|v| *v < 0.0));
    }

    #[test]
    fn normalized_area_is_one() {
        let spec = HistogramSpec {
            breaks: Breaks::Edges(vec![0.0, 0.5, 2.0, 3.0]),
            normalize: true,
            allow_negative: false,
        };
        let req = StatRequest::laplace(0.5).unwrap();
        let mut rng = RandomSource::from_seed(3);
        let x: Vec<f64> = (0..40).map(|i| i as f64 * 0.07).collect();
        let h = &histogram_dp(&x, &spec, &req, &mut rng).unwrap()[0].value;
        let area: f64 = h
            .values
            .iter()
            .zip(h.edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum();
        assert!((area - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_edges_rejected() {
        let spec = HistogramSpec {
            breaks: Breaks::Edges(vec![0.0, 0.0, 1.0]),
            normalize: false,
            allow_negative: false,
        };
        assert!(spec.edges().is_err());
    }

    fn factor(vals: &[&str], levels: &[&str]) -> Factor {
        Factor::new(
            vals.iter().map(|s| s.to_string()).collect(),
            levels.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn table_has_every_cell() {
        let a = factor(&["x", "x", "y", "x"], &["x", "y", "z"]);
        let b = factor(&["u", "v", "u", "u"], &["u", "v"]);
        let req = StatRequest::laplace(1e9).unwrap();
        let mut rng = RandomSource::from_seed(3);
        let t = &table_dp(&[a, b], &req, false, &mut rng).unwrap()[0].value;
        assert_eq!(t.counts.len(), 6);
        assert!((t.get(&[0, 0]) - 2.0).abs() < 1e-6);
        assert!((t.get(&[0, 1]) - 1.0).abs() < 1e-6);
        assert!((t.get(&[1, 0]) - 1.0).abs() < 1e-6);
        assert!(t.get(&[2, 1]) >= 0.0 && t.get(&[2, 1]) < 1e-6);
    }

    #[test]
    fn table_rejects_unknown_label() {
        let a = factor(&["x", "q"], &["x", "y"]);
        let req = StatRequest::laplace(1.0).unwrap();
        let mut rng = RandomSource::from_seed(3);
        assert!(table_dp(&[a], &req, false, &mut rng).is_err());
    }

    #[test]
    fn both_neighbors_use_their_own_sensitivity() {
        let a = factor(&["x"], &["x", "y"]);
        let req = StatRequest::laplace(1.0).unwrap().with_neighbor(NeighborChoice::Both);
        let mut rng = RandomSource::from_seed(3);
        let t = table_dp(&[a], &req, false, &mut rng).unwrap();
        assert_eq!(t[0].meta.sensitivity, 2.0);
        assert_eq!(t[1].meta.sensitivity, 1.0);
    }
}
