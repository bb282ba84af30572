//! L2-regularized binary logistic regression.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::sgns::sigmoid;

const HISTORY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    /// Penalty `λ` in `mean log-loss + λ/(2n)·‖w‖²`; the bias is not penalized.
    pub l2: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            l2: 1.0,
            tol: 1e-6,
            max_iter: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

impl LogRegModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        sigmoid(self.decision(x))
    }
}

#[inline]
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// Objective value and gradient (`d` weights then the bias) at `theta`.
pub fn objective(x: &Matrix, y: &[bool], l2: f64, theta: &[f64], grad: &mut [f64]) -> f64 {
    let d = x.cols();
    let n = x.rows() as f64;
    let (w, b) = (&theta[..d], theta[d]);
    grad.iter_mut().for_each(|g| *g = 0.0);
    let mut loss = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        let row = x.row(i);
        let z = dot(w, row) + b;
        loss += if yi { softplus(-z) } else { softplus(z) };
        let r = sigmoid(z) - if yi { 1.0 } else { 0.0 };
        for (g, xi) in grad[..d].iter_mut().zip(row) {
            *g += r * xi;
        }
        grad[d] += r;
    }
    grad.iter_mut().for_each(|g| *g /= n);
    for (g, wi) in grad[..d].iter_mut().zip(w) {
        *g += l2 / n * wi;
    }
    loss / n + l2 / (2.0 * n) * dot(w, w)
}

/// Fits by L-BFGS with backtracking until the gradient norm drops below
/// `tol` or `max_iter` iterations have run.
pub fn logreg_fit(x: &Matrix, y: &[bool], cfg: &LogRegConfig) -> Result<LogRegModel> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch(x.rows(), y.len()));
    }
    let pos = y.iter().filter(|&&l| l).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::DegenerateTrainingSet(format!(
            "{pos} positives among {} examples",
            y.len()
        )));
    }
    if cfg.l2.is_nan() || cfg.l2 < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "l2 must be >= 0, got {}",
            cfg.l2
        )));
    }
    let p = x.cols() + 1;
    let mut theta = vec![0.0; p];
    let mut grad = vec![0.0; p];
    let mut f = objective(x, y, cfg.l2, &theta, &mut grad);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(HISTORY);
    let mut next = vec![0.0; p];
    let mut next_grad = vec![0.0; p];
    let mut iterations = 0;
    let mut gnorm = dot(&grad, &grad).sqrt();

    while gnorm >= cfg.tol && iterations < cfg.max_iter {
        iterations += 1;
        let dir = two_loop(&grad, &history);
        let slope = dot(&dir, &grad);
        let (dir, slope) = if slope < 0.0 {
            (dir, slope)
        } else {
            history.clear();
            (grad.iter().map(|g| -g).collect(), -gnorm * gnorm)
        };
        let mut step = if history.is_empty() {
            1.0 / gnorm.max(1.0)
        } else {
            1.0
        };
        let mut f_next;
        loop {
            for i in 0..p {
                next[i] = theta[i] + step * dir[i];
            }
            f_next = objective(x, y, cfg.l2, &next, &mut next_grad);
            if f_next <= f + 1e-4 * step * slope || step < 1e-20 {
                break;
            }
            step *= 0.5;
        }
        if !f_next.is_finite() {
            return Err(Error::Numerical("logistic regression diverged".into()));
        }
        if step < 1e-20 {
            break;
        }
        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, yv, 1.0 / sy));
        }
        std::mem::swap(&mut theta, &mut next);
        std::mem::swap(&mut grad, &mut next_grad);
        f = f_next;
        gnorm = dot(&grad, &grad).sqrt();
    }
    let bias = theta.pop().unwrap();
    Ok(LogRegModel {
        weights: theta,
        bias,
        l2: cfg.l2,
        iterations,
        grad_norm: gnorm,
    })
}

fn two_loop(grad: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|qi| *qi *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|qi| *qi = -*qi);
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grad_norm_at(x: &Matrix, y: &[bool], m: &LogRegModel) -> f64 {
        let mut theta = m.weights.clone();
        theta.push(m.bias);
        let mut g = vec![0.0; theta.len()];
        objective(x, y, m.l2, &theta, &mut g);
        dot(&g, &g).sqrt()
    }

    #[test]
    fn separable_points() {
        let x = Matrix::from_rows(&[vec![-1.0], vec![1.0]]);
        let y = [false, true];
        let cfg = LogRegConfig {
            l2: 0.01,
            ..LogRegConfig::default()
        };
        let m = logreg_fit(&x, &y, &cfg).unwrap();
        assert!(m.predict_proba(&[1.0]) > 0.9);
        assert!(m.predict_proba(&[-1.0]) < 0.1);
        // the default penalty on 20 copies per side also clears 0.9
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![if i % 2 == 0 { -1.0 } else { 1.0 }])
            .collect();
        let ys: Vec<bool> = (0..40).map(|i| i % 2 == 1).collect();
        let m = logreg_fit(&Matrix::from_rows(&rows), &ys, &LogRegConfig::default()).unwrap();
        assert!(m.predict_proba(&[1.0]) > 0.9);
    }

    #[test]
    fn constant_features_give_prior() {
        let x = Matrix::from_rows(&vec![vec![1.0, 1.0]; 40]);
        let y: Vec<bool> = (0..40).map(|i| i < 10).collect();
        let m = logreg_fit(&x, &y, &LogRegConfig::default()).unwrap();
        assert!((m.predict_proba(&[1.0, 1.0]) - 0.25).abs() < 1e-3);
    }

    #[test]
    fn optimum_gradient_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..300)
            .map(|_| (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<bool> = rows
            .iter()
            .map(|r| r[0] + 0.5 * r[1] + rng.gen_range(-0.3..0.3) > 0.0)
            .collect();
        let x = Matrix::from_rows(&rows);
        let m = logreg_fit(&x, &y, &LogRegConfig::default()).unwrap();
        assert!(m.grad_norm < 1e-6, "{}", m.grad_norm);
        assert!(grad_norm_at(&x, &y, &m) < 1e-5);
        assert!(m.iterations < 1_000);
    }

    #[test]
    fn single_class_is_degenerate() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0]]);
        assert!(matches!(
            logreg_fit(&x, &[true, true], &LogRegConfig::default()),
            Err(Error::DegenerateTrainingSet(_))
        ));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .collect();
        let y: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
        let x = Matrix::from_rows(&rows);
        let theta = vec![0.3, -0.2, 0.5, 0.1];
        let mut g = vec![0.0; 4];
        objective(&x, &y, 1.0, &theta, &mut g);
        let mut scratch = vec![0.0; 4];
        for k in 0..4 {
            let mut a = theta.clone();
            let mut b = theta.clone();
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (objective(&x, &y, 1.0, &a, &mut scratch)
                - objective(&x, &y, 1.0, &b, &mut scratch))
                / 2e-6;
            assert!((fd - g[k]).abs() < 1e-7);
        }
    }
}
