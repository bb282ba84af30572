use super::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::matrix::dot;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln σ(x)` without overflow for large `|x|`.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        -(-x).exp().ln_1p()
    } else {
        x - x.exp().ln_1p()
    }
}

/// Per-pair objective `ln σ(v′_s·c_pos) + Σ_j ln σ(−v′_s·c_j)`.
pub fn sgns_objective(
    emb: &EmbeddingMatrix,
    seed: usize,
    context: usize,
    negatives: &[usize],
) -> f64 {
    let u = emb.input.row(seed);
    let mut obj = log_sigmoid(dot(u, emb.context.row(context)));
    for &n in negatives {
        obj += log_sigmoid(-dot(u, emb.context.row(n)));
    }
    obj
}

/// Gradient of [`sgns_objective`]; context gradients are summed per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SgnsGradients {
    pub loss: f64,
    pub input: Vec<f64>,
    pub context: Vec<(usize, Vec<f64>)>,
}

pub fn sgns_gradients(
    emb: &EmbeddingMatrix,
    seed: usize,
    context: usize,
    negatives: &[usize],
) -> SgnsGradients {
    let d = emb.dim();
    let u = emb.input.row(seed);
    let mut grad_u = vec![0.0; d];
    let mut ctx: Vec<(usize, Vec<f64>)> = Vec::new();
    let targets = std::iter::once((context, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (t, label) in targets {
        let c = emb.context.row(t);
        let g = label - sigmoid(dot(u, c));
        for (gu, ci) in grad_u.iter_mut().zip(c) {
            *gu += g * ci;
        }
        let slot = match ctx.iter().position(|(n, _)| *n == t) {
            Some(i) => i,
            None => {
                ctx.push((t, vec![0.0; d]));
                ctx.len() - 1
            }
        };
        for (gc, ui) in ctx[slot].1.iter_mut().zip(u) {
            *gc += g * ui;
        }
    }
    SgnsGradients {
        loss: -sgns_objective(emb, seed, context, negatives),
        input: grad_u,
        context: ctx,
    }
}

/// One gradient-ascent step on the pair objective; returns the loss (the
/// negated objective) before the update.
///
/// Targets are updated in sequence, positive first, each against the
/// pre-step input vector; the input vector moves last by the accumulated
/// gradient.
pub fn sgns_step(
    emb: &mut EmbeddingMatrix,
    seed: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
) -> Result<f64> {
    let mut scratch = vec![0.0; emb.dim()];
    step_in_place(emb, seed, context, negatives, lr, &mut scratch)
}

pub(super) fn step_in_place(
    emb: &mut EmbeddingMatrix,
    seed: usize,
    context: usize,
    negatives: &[usize],
    lr: f64,
    grad_u: &mut [f64],
) -> Result<f64> {
    grad_u.iter_mut().for_each(|x| *x = 0.0);
    let u = emb.input.row(seed);
    let mut loss = 0.0;
    let targets = std::iter::once((context, 1.0)).chain(negatives.iter().map(|&n| (n, 0.0)));
    for (t, label) in targets {
        let c = emb.context.row_mut(t);
        let score = dot(u, c);
        loss -= if label > 0.0 {
            log_sigmoid(score)
        } else {
            log_sigmoid(-score)
        };
        let g = lr * (label - sigmoid(score));
        for ((gu, ci), ui) in grad_u.iter_mut().zip(c.iter_mut()).zip(u) {
            *gu += g * *ci;
            *ci += g * ui;
        }
    }
    let u = emb.input.row_mut(seed);
    for (ui, gu) in u.iter_mut().zip(grad_u.iter()) {
        *ui += gu;
    }
    if !loss.is_finite() || u.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite update for pair ({seed}, {context}), loss {loss}"
        )));
    }
    Ok(loss)
}
