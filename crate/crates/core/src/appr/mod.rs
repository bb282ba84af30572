//! Approximate personalized PageRank neighborhoods.
//!
//! [`compute_appr`] runs the locality-adapted push: residual mass is pushed
//! from the node with the largest degree-normalized residual, a fraction
//! `2α/(1+α)` settles into the solution and the rest spreads evenly over
//! the neighbors. The loop stops once the share contributed by the most
//! recent non-seed push falls to `delta`, so high-degree seeds keep only
//! their most visited neighbors. Finally the seed's own entry is replaced by
//! the largest other entry.
//!
//! The push is not the lazy-walk variant: it is exact PPR with teleportation
//! `β = 2α/(1+α)` (see [`ApprConfig::beta`]), which is what [`exact_ppr`]
//! solves for.

mod exact;
mod push;
mod sidecar;

pub use exact::{exact_ppr, exact_ppr_from, EXACT_PPR_MAX_NODES};
pub use push::{ApprPush, PushWorkspace};
pub use sidecar::{read_sidecar, write_sidecar, ApprSidecar};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::CsrGraph;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApprConfig {
    /// Teleportation parameter in `(0, 1)`.
    pub alpha: f64,
    /// Probability significance threshold in `(0, 1)`.
    pub delta: f64,
    /// Keep the seed's raw mass instead of replacing it by the max entry.
    pub skip_seed_replacement: bool,
}

impl Default for ApprConfig {
    fn default() -> Self {
        ApprConfig {
            alpha: 0.2,
            delta: 1e-4,
            skip_seed_replacement: false,
        }
    }
}

impl ApprConfig {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        let cfg = ApprConfig {
            alpha,
            delta,
            skip_seed_replacement: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in (0,1), got {}",
                self.alpha
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "delta must be in (0,1), got {}",
                self.delta
            )));
        }
        Ok(())
    }

    /// Teleportation of the equivalent standard PPR: `2α/(1+α)`.
    pub fn beta(&self) -> f64 {
        2.0 * self.alpha / (1.0 + self.alpha)
    }

    /// Fraction of a pushed residual that moves to the neighbors.
    pub fn spread(&self) -> f64 {
        (1.0 - self.alpha) / (1.0 + self.alpha)
    }

    /// Upper bound on non-seed pushes, `ceil(1/delta)`.
    pub fn push_bound(&self) -> usize {
        (1.0 / self.delta).ceil() as usize
    }
}

/// Truncated APPR of one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ApprVector {
    pub seed: usize,
    /// `(node, mass)` sorted by node; every mass is positive.
    pub entries: Vec<(usize, f64)>,
    /// Residual mass left undistributed at termination.
    pub residual_l1: f64,
    pub num_pushes: usize,
    pub non_seed_pushes: usize,
}

impl ApprVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(v, _)| v)
    }

    pub fn mass(&self, node: usize) -> f64 {
        self.entries
            .binary_search_by_key(&node, |&(v, _)| v)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }
}

pub fn compute_appr(g: &CsrGraph, seed: usize, cfg: &ApprConfig) -> Result<ApprVector> {
    let mut ws = PushWorkspace::new(g.num_nodes());
    compute_appr_with(g, seed, cfg, &mut ws)
}

/// [`compute_appr`] reusing a caller-owned workspace.
pub fn compute_appr_with(
    g: &CsrGraph,
    seed: usize,
    cfg: &ApprConfig,
    ws: &mut PushWorkspace,
) -> Result<ApprVector> {
    let mut push = ApprPush::new(g, seed, *cfg, ws)?;
    push.run();
    push.finish()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedSeed {
    pub node: usize,
    pub reason: String,
}

/// One vector per usable seed, ordered by seed id.
#[derive(Debug, Clone, PartialEq)]
pub struct ApprBatch {
    pub vectors: Vec<ApprVector>,
    pub skipped: Vec<SkippedSeed>,
}

/// APPR for every node. Seeds run in parallel on the current rayon pool;
/// isolated or degenerate seeds are skipped with a warning.
pub fn compute_all_appr(g: &CsrGraph, cfg: &ApprConfig) -> Result<ApprBatch> {
    cfg.validate()?;
    let n = g.num_nodes();
    let results: Vec<Result<ApprVector>> = (0..n)
        .into_par_iter()
        .map_init(
            || PushWorkspace::new(n),
            |ws, seed| compute_appr_with(g, seed, cfg, ws),
        )
        .collect();
    let mut vectors = Vec::with_capacity(n);
    let mut skipped = Vec::new();
    for (seed, res) in results.into_iter().enumerate() {
        match res {
            Ok(v) => vectors.push(v),
            Err(e @ (Error::IsolatedNode(_) | Error::DegenerateAppr(_))) => {
                skipped.push(SkippedSeed {
                    node: seed,
                    reason: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    if !skipped.is_empty() {
        log::warn!(
            "skipped {} seeds without a usable APPR vector",
            skipped.len()
        );
    }
    Ok(ApprBatch { vectors, skipped })
}
