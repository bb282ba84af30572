//! Vose alias tables over APPR neighborhoods.

use rand::Rng;

use crate::appr::ApprVector;
use crate::error::{Error, Result};

/// O(1) sampler over a fixed discrete distribution of nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasTable {
    seed: usize,
    support: Vec<usize>,
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    /// Table over the normalized masses of `v`. Zero-mass entries stay in the
    /// support but are never drawn.
    pub fn from_appr(v: &ApprVector) -> Result<Self> {
        let (support, weights): (Vec<usize>, Vec<f64>) = v.entries.iter().copied().unzip();
        Self::new(v.seed, support, &weights)
    }

    pub fn new(seed: usize, support: Vec<usize>, weights: &[f64]) -> Result<Self> {
        if support.len() != weights.len() {
            return Err(Error::DimensionMismatch(support.len(), weights.len()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidConfig(
                "alias weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if support.is_empty() || total <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        let k = weights.len();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * k as f64 / total).collect();
        let mut prob = vec![0.0; k];
        let mut alias: Vec<usize> = (0..k).collect();
        let mut small = Vec::with_capacity(k);
        let mut large = Vec::with_capacity(k);
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // leftovers are 1 up to rounding
        for i in large.into_iter().chain(small) {
            prob[i] = 1.0;
        }
        Ok(AliasTable {
            seed,
            support,
            prob,
            alias,
        })
    }

    /// Uniform table over `0..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(0, (0..n).collect(), &vec![1.0; n])
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn prob(&self) -> &[f64] {
        &self.prob
    }

    pub fn alias(&self) -> &[usize] {
        &self.alias
    }

    /// Exact probability the table assigns to each support position.
    pub fn implied_distribution(&self) -> Vec<f64> {
        let k = self.len() as f64;
        let mut out = vec![0.0; self.len()];
        for i in 0..self.len() {
            out[i] += self.prob[i] / k;
            out[self.alias[i]] += (1.0 - self.prob[i]) / k;
        }
        out
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.gen_range(0..self.support.len());
        if rng.gen::<f64>() < self.prob[i] {
            self.support[i]
        } else {
            self.support[self.alias[i]]
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}
