//! Skip-gram with negative sampling over APPR-sampled `(seed, neighbor)`
//! pairs.

mod batch;
mod io;
mod step;
mod train;

pub use batch::{generate_batch, BatchGenerator, TrainingBatch};
pub use io::{
    read_embeddings, read_embeddings_binary, read_embeddings_text, write_embeddings_binary,
    write_embeddings_text, EmbeddingFile,
};
pub use step::{log_sigmoid, sgns_gradients, sgns_objective, sgns_step, sigmoid, SgnsGradients};
pub use train::{train, train_on_graph, TrainReport, Trained};

use rand::Rng;

use crate::appr::ApprConfig;
use crate::error::{Error, Result};
use crate::matrix::{cosine, Matrix};

/// Input (`v′`) and context (`v_c`) representations, both `|V| × d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    pub input: Matrix,
    pub context: Matrix,
}

impl EmbeddingMatrix {
    pub fn zeros(num_nodes: usize, dim: usize) -> Self {
        EmbeddingMatrix {
            input: Matrix::zeros(num_nodes, dim),
            context: Matrix::zeros(num_nodes, dim),
        }
    }

    /// word2vec initialization: inputs uniform in `±0.5/d`, contexts zero.
    pub fn random<R: Rng>(num_nodes: usize, dim: usize, rng: &mut R) -> Self {
        let mut m = Self::zeros(num_nodes, dim);
        let half = 0.5 / dim as f64;
        for x in m.input.as_mut_slice() {
            *x = rng.gen_range(-half..half);
        }
        m
    }

    pub fn num_nodes(&self) -> usize {
        self.input.rows()
    }

    pub fn dim(&self) -> usize {
        self.input.cols()
    }

    pub fn is_finite(&self) -> bool {
        self.input.is_finite() && self.context.is_finite()
    }

    pub fn cosine(&self, u: usize, v: usize) -> f64 {
        cosine(self.input.row(u), self.input.row(v))
    }
}

/// Source of negative contexts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseDistribution {
    /// `P_n(v) ∝ degree(v)^exponent`.
    DegreePower(f64),
    /// Uniform over all nodes.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub dim: usize,
    pub appr: ApprConfig,
    pub negatives: usize,
    /// Pairs per batch; defaults to `10·|V|`.
    pub batch_size: Option<usize>,
    /// Defaults to `training_budget(|V|, walk_len, walks_per_node, window) / batch_size`.
    pub max_batches: Option<usize>,
    pub walk_len: usize,
    pub walks_per_node: usize,
    pub window: usize,
    pub lr_initial: f64,
    pub lr_final: f64,
    pub noise: NoiseDistribution,
    pub rng_seed: u64,
    /// 1 = deterministic single worker; more = lock-free parallel updates.
    pub threads: usize,
    /// Stop early when the 50-batch moving average loss changes by less
    /// than this relative amount. `None` runs the full budget.
    pub plateau_tolerance: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 128,
            appr: ApprConfig::default(),
            negatives: 5,
            batch_size: None,
            max_batches: None,
            walk_len: 80,
            walks_per_node: 10,
            window: 10,
            lr_initial: 0.025,
            lr_final: 1e-4,
            noise: NoiseDistribution::DegreePower(0.75),
            rng_seed: 1,
            threads: 1,
            plateau_tolerance: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.dim == 0 {
            return bad("dim must be >= 1".into());
        }
        if self.negatives == 0 {
            return bad("negatives must be >= 1".into());
        }
        if !(self.lr_final > 0.0 && self.lr_initial >= self.lr_final) {
            return bad(format!(
                "need lr_initial >= lr_final > 0, got {} and {}",
                self.lr_initial, self.lr_final
            ));
        }
        if self.walk_len == 0 || self.walks_per_node == 0 || self.window == 0 {
            return bad("walk budget parameters must be >= 1".into());
        }
        if self.threads == 0 {
            return bad("threads must be >= 1".into());
        }
        if let NoiseDistribution::DegreePower(e) = self.noise {
            if !e.is_finite() {
                return bad("noise exponent must be finite".into());
            }
        }
        self.appr.validate()
    }

    /// `(batch_size, max_batches)` for a graph of `num_nodes` with
    /// `num_samplers` usable seeds.
    pub fn resolve_schedule(
        &self,
        num_nodes: usize,
        num_samplers: usize,
    ) -> Result<(usize, usize)> {
        let batch_size = self.batch_size.unwrap_or(10 * num_nodes);
        if batch_size < num_samplers {
            return Err(Error::InvalidConfig(format!(
                "batch_size {batch_size} is smaller than the {num_samplers} samplers"
            )));
        }
        let max_batches = self.max_batches.unwrap_or_else(|| {
            let total = training_budget(num_nodes, self.walk_len, self.walks_per_node, self.window);
            (total / batch_size as u64) as usize
        });
        Ok((batch_size, max_batches))
    }
}

/// Expected number of training pairs the walk-and-window baseline would
/// generate: `|V|·[γ·r·2·E(U(1,w)) − 2·Σ_{i=1..w} E(U(1,i))]` with
/// `E(U(x,y)) = (x+y)/2`.
pub fn training_budget(
    num_nodes: usize,
    walk_len: usize,
    walks_per_node: usize,
    window: usize,
) -> u64 {
    num_nodes as u64 * training_budget_per_node(walk_len, walks_per_node, window)
}

pub fn training_budget_per_node(walk_len: usize, walks_per_node: usize, window: usize) -> u64 {
    let (g, r, w) = (walk_len as u64, walks_per_node as u64, window as u64);
    // 2·E(U(1,w)) = w+1 and 2·Σ E(U(1,i)) = Σ (1+i) = w + w(w+1)/2
    (g * r * (w + 1)).saturating_sub(w + w * (w + 1) / 2)
}
