//! Class-weighted multinomial logistic regression fitted by full-batch
//! accelerated gradient descent with backtracking line search.

use ndarray::{Array2, ArrayView2, Axis, Zip};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// L2 penalty on the non-bias weights.
    pub l2: f64,
    /// Per-class sample weights, indexed by [`Label::index`](crate::label::Label::index).
    pub class_weights: [f64; 3],
    /// Stop once the gradient's Euclidean norm is at or below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            l2: 1.0,
            class_weights: [1.0; 3],
            tolerance: 1e-6,
            max_iterations: 20_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fit {
    /// `3 x (d + 1)`; the last column is the bias.
    pub weights: Array2<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Weighted softmax cross-entropy with L2 on non-bias weights. `x` holds one
/// row per sample with a trailing constant-1 column; rows of `w` for classes
/// not in `present` are ignored.
pub(crate) struct Objective<'a> {
    x: ArrayView2<'a, f64>,
    targets: &'a [usize],
    sample_weights: Vec<f64>,
    present: [bool; 3],
    l2: f64,
}

impl<'a> Objective<'a> {
    pub(crate) fn new(x: ArrayView2<'a, f64>, targets: &'a [usize], present: [bool; 3], opts: &FitOptions) -> Self {
        let n = targets.len() as f64;
        let sample_weights = targets.iter().map(|&y| opts.class_weights[y] / n).collect();
        Objective {
            x,
            targets,
            sample_weights,
            present,
            l2: opts.l2,
        }
    }

    /// Class probabilities for every row, `n x 3`, absent classes at 0.
    fn probabilities(&self, w: &Array2<f64>) -> Array2<f64> {
        let mut scores = self.x.dot(&w.t());
        for mut row in scores.axis_iter_mut(Axis(0)) {
            let max = (0..3)
                .filter(|&k| self.present[k])
                .map(|k| row[k])
                .fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for k in 0..3 {
                row[k] = if self.present[k] { (row[k] - max).exp() } else { 0.0 };
                total += row[k];
            }
            row.mapv_inplace(|v| v / total);
        }
        scores
    }

    fn penalty(&self, w: &Array2<f64>) -> f64 {
        let d = w.ncols() - 1;
        0.5 * self.l2 * w.slice(ndarray::s![.., ..d]).iter().map(|v| v * v).sum::<f64>()
    }

    pub(crate) fn value(&self, w: &Array2<f64>) -> f64 {
        let p = self.probabilities(w);
        let loss: f64 = self
            .targets
            .iter()
            .enumerate()
            .map(|(i, &y)| -self.sample_weights[i] * p[[i, y]].max(f64::MIN_POSITIVE).ln())
            .sum();
        loss + self.penalty(w)
    }

    pub(crate) fn value_and_gradient(&self, w: &Array2<f64>) -> (f64, Array2<f64>) {
        let mut p = self.probabilities(w);
        let mut loss = 0.0;
        for (i, &y) in self.targets.iter().enumerate() {
            loss -= self.sample_weights[i] * p[[i, y]].max(f64::MIN_POSITIVE).ln();
            p[[i, y]] -= 1.0;
            let sw = self.sample_weights[i];
            p.row_mut(i).mapv_inplace(|v| v * sw);
        }
        let mut grad = p.t().dot(&self.x);
        let d = w.ncols() - 1;
        Zip::from(grad.slice_mut(ndarray::s![.., ..d]))
            .and(w.slice(ndarray::s![.., ..d]))
            .for_each(|g, &wv| *g += self.l2 * wv);
        for k in 0..3 {
            if !self.present[k] {
                grad.row_mut(k).fill(0.0);
            }
        }
        (loss + self.penalty(w), grad)
    }
}

fn norm(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Minimises the objective from a zero start. Momentum follows the FISTA
/// schedule and is reset whenever the step direction opposes the gradient.
pub fn fit(x: ArrayView2<'_, f64>, targets: &[usize], present: [bool; 3], opts: &FitOptions) -> Fit {
    let objective = Objective::new(x, targets, present, opts);
    let shape = (3, x.ncols());
    let mut current = Array2::<f64>::zeros(shape);
    let mut probe = current.clone();
    let mut momentum = 1.0_f64;
    let mut step = 1.0_f64;
    let mut iterations = 0;

    loop {
        let (f_probe, grad) = objective.value_and_gradient(&probe);
        let gnorm = norm(&grad);
        if gnorm <= opts.tolerance || iterations >= opts.max_iterations {
            return Fit {
                weights: probe,
                iterations,
                gradient_norm: gnorm,
                converged: gnorm <= opts.tolerance,
            };
        }
        iterations += 1;

        // Armijo backtracking from the probe point.
        let sq = gnorm * gnorm;
        let next = loop {
            let candidate = &probe - &(&grad * step);
            if objective.value(&candidate) <= f_probe - 0.5 * step * sq || step < 1e-20 {
                break candidate;
            }
            step *= 0.5;
        };

        let delta = &next - &current;
        let restart = (&grad * &delta).sum() > 0.0;
        if restart {
            momentum = 1.0;
            probe = next.clone();
        } else {
            let upcoming = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
            probe = &next + &(&delta * ((momentum - 1.0) / upcoming));
            momentum = upcoming;
        }
        current = next;
        step *= 1.25;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    /// Central finite differences on the objective.
    #[test]
    fn gradient_matches_finite_differences() {
        let x = array![[0.5, -1.0, 1.0], [1.5, 0.3, 1.0], [-0.7, 2.0, 1.0], [0.1, 0.1, 1.0]];
        let y = [0usize, 2, 1, 2];
        let opts = FitOptions {
            l2: 0.3,
            class_weights: [2.0, 0.5, 1.0],
            ..FitOptions::default()
        };
        let obj = Objective::new(x.view(), &y, [true; 3], &opts);
        let w = array![[0.2, -0.1, 0.05], [0.0, 0.3, -0.2], [-0.4, 0.1, 0.1]];
        let (_, g) = obj.value_and_gradient(&w);
        let h = 1e-6;
        for k in 0..3 {
            for j in 0..3 {
                let mut plus = w.clone();
                plus[[k, j]] += h;
                let mut minus = w.clone();
                minus[[k, j]] -= h;
                let fd = (obj.value(&plus) - obj.value(&minus)) / (2.0 * h);
                assert!((fd - g[[k, j]]).abs() < 1e-7, "({k},{j}) fd {fd} vs {}", g[[k, j]]);
            }
        }
    }

    #[test]
    fn reaches_gradient_tolerance() {
        let x = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, -1.0, 1.0], [0.5, 0.5, 1.0]];
        let y = [2usize, 1, 0, 1, 2];
        let f = fit(x.view(), &y, [true; 3], &FitOptions { l2: 0.1, ..FitOptions::default() });
        assert!(f.converged, "gradient norm {}", f.gradient_norm);
        assert!(f.gradient_norm <= 1e-6);
    }

    #[test]
    fn absent_class_rows_stay_zero() {
        let x = array![[1.0, 1.0], [-1.0, 1.0], [2.0, 1.0]];
        let y = [2usize, 0, 2];
        let f = fit(x.view(), &y, [true, false, true], &FitOptions::default());
        assert!(f.converged);
        assert!(f.weights.row(1).iter().all(|&v| v == 0.0));
    }
}
