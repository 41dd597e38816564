use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spearman {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PValueMethod {
    /// Two-sided Student-t approximation with `n - 2` degrees of freedom.
    #[default]
    TApproximation,
    /// Exhaustive enumeration of all permutations; limited to `n <= 10`.
    ExactPermutation,
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    if a == b {
        return Some(1.0);
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a correlation under the t approximation.
pub fn t_approximation_p_value(rho: f64, n: usize) -> f64 {
    if rho.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = rho * (df / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

pub fn spearman(a: &[f64], b: &[f64]) -> Result<Spearman> {
    spearman_with(a, b, PValueMethod::TApproximation)
}

pub fn spearman_with(a: &[f64], b: &[f64], method: PValueMethod) -> Result<Spearman> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            gold: a.len(),
            predicted: b.len(),
        });
    }
    let n = a.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!("spearman needs at least 3 points, got {n}")));
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let rho = pearson(&ra, &rb)
        .ok_or_else(|| Error::InsufficientData("a sequence is constant; rank correlation undefined".into()))?;
    let p_value = match method {
        PValueMethod::TApproximation => t_approximation_p_value(rho, n),
        PValueMethod::ExactPermutation => permutation_p_value(&ra, &rb, rho)?,
    };
    Ok(Spearman { rho, p_value, n })
}

fn permutation_p_value(ra: &[f64], rb: &[f64], observed: f64) -> Result<f64> {
    let n = ra.len();
    if n > 10 {
        return Err(Error::Invalid(format!("exact permutation p-value is limited to n <= 10, got {n}")));
    }
    let mut perm: Vec<f64> = rb.to_vec();
    let mut extreme = 0u64;
    let mut total = 0u64;
    let threshold = observed.abs() - 1e-12;
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut visit = |p: &[f64]| {
        total += 1;
        if pearson(ra, p).is_some_and(|r| r.abs() >= threshold) {
            extreme += 1;
        }
    };
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(extreme as f64 / total as f64)
}
