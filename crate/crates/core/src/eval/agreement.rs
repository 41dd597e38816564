//! Krippendorff's alpha over real-valued annotations.

use std::collections::BTreeMap;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    /// Squared difference.
    Interval,
    /// Squared rank-mass distance over the pooled value frequencies.
    Ordinal,
}

/// `1 - D_observed / D_expected`. Each unit lists the values assigned to one
/// item; units with fewer than two values are not pairable and are ignored.
/// When every pairable value is identical the expected disagreement is zero
/// and alpha is defined as 1.
pub fn krippendorff_alpha(units: &[Vec<f64>], metric: DistanceMetric) -> Result<f64> {
    let pairable: Vec<&Vec<f64>> = units.iter().filter(|u| u.len() >= 2).collect();
    if pairable.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "alpha needs at least 2 units with 2 or more values, found {}",
            pairable.len()
        )));
    }
    if pairable.iter().flat_map(|u| u.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("annotation values must be finite".into()));
    }

    let distance = Distance::new(&pairable, metric);
    let n: usize = pairable.iter().map(|u| u.len()).sum();
    let n_f = n as f64;

    let mut observed = 0.0;
    for unit in &pairable {
        let mut within = 0.0;
        for (i, &a) in unit.iter().enumerate() {
            for &b in &unit[i + 1..] {
                within += 2.0 * distance.between(a, b);
            }
        }
        observed += within / (unit.len() - 1) as f64;
    }
    observed /= n_f;

    let expected = distance.pooled_sum() / (n_f * (n_f - 1.0));
    if expected == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - observed / expected)
}

struct Distance {
    metric: DistanceMetric,
    /// Pooled frequency of each distinct value, ascending.
    freq: BTreeMap<OrderedFloat<f64>, usize>,
    /// For ordinal: cumulative frequency up to and including each value.
    cumulative: BTreeMap<OrderedFloat<f64>, f64>,
    sum: f64,
    sum_sq: f64,
    n: f64,
}

impl Distance {
    fn new(units: &[&Vec<f64>], metric: DistanceMetric) -> Self {
        let mut freq: BTreeMap<OrderedFloat<f64>, usize> = BTreeMap::new();
        let (mut sum, mut sum_sq, mut n) = (0.0, 0.0, 0.0);
        for &v in units.iter().flat_map(|u| u.iter()) {
            *freq.entry(OrderedFloat(v)).or_insert(0) += 1;
            sum += v;
            sum_sq += v * v;
            n += 1.0;
        }
        let mut cumulative = BTreeMap::new();
        let mut run = 0.0;
        for (&v, &c) in &freq {
            run += c as f64;
            cumulative.insert(v, run);
        }
        Distance {
            metric,
            freq,
            cumulative,
            sum,
            sum_sq,
            n,
        }
    }

    fn between(&self, a: f64, b: f64) -> f64 {
        match self.metric {
            DistanceMetric::Interval => (a - b) * (a - b),
            DistanceMetric::Ordinal => {
                if a == b {
                    return 0.0;
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let n_lo = self.freq[&OrderedFloat(lo)] as f64;
                let n_hi = self.freq[&OrderedFloat(hi)] as f64;
                // sum of frequencies for values in [lo, hi]
                let span = self.cumulative[&OrderedFloat(hi)] - self.cumulative[&OrderedFloat(lo)] + n_lo;
                let d = span - (n_lo + n_hi) / 2.0;
                d * d
            }
        }
    }

    /// Sum of distances over all ordered pairs of distinct pooled values.
    fn pooled_sum(&self) -> f64 {
        match self.metric {
            DistanceMetric::Interval => (2.0 * self.n * self.sum_sq - 2.0 * self.sum * self.sum).max(0.0),
            DistanceMetric::Ordinal => {
                let values: Vec<(f64, f64)> = self.freq.iter().map(|(v, &c)| (v.0, c as f64)).collect();
                let mut total = 0.0;
                for (i, &(a, na)) in values.iter().enumerate() {
                    for &(b, nb) in &values[i + 1..] {
                        total += 2.0 * na * nb * self.between(a, b);
                    }
                }
                total
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_agreement_is_one() {
        let units = vec![vec![1.0, 1.0, 1.0], vec![-0.5, -0.5], vec![0.25, 0.25]];
        assert_eq!(krippendorff_alpha(&units, DistanceMetric::Interval).unwrap(), 1.0);
    }

    #[test]
    fn constant_values_define_alpha_as_one() {
        let units = vec![vec![0.3, 0.3], vec![0.3, 0.3]];
        assert_eq!(krippendorff_alpha(&units, DistanceMetric::Interval).unwrap(), 1.0);
    }

    #[test]
    fn permuting_values_across_units_lowers_alpha() {
        let agree = vec![vec![1.0, 1.0], vec![-1.0, -1.0]];
        let mixed = vec![vec![1.0, -1.0], vec![1.0, -1.0]];
        let a = krippendorff_alpha(&agree, DistanceMetric::Interval).unwrap();
        let b = krippendorff_alpha(&mixed, DistanceMetric::Interval).unwrap();
        assert!(b < a);
    }

    #[test]
    fn too_few_units() {
        assert!(krippendorff_alpha(&[vec![1.0, 2.0]], DistanceMetric::Interval).is_err());
        assert!(krippendorff_alpha(&[vec![1.0, 2.0], vec![3.0]], DistanceMetric::Interval).is_err());
    }
}
