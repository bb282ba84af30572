//! Uniform random walks with a randomly shrunk skip-gram window, the
//! DeepWalk way of generating training pairs.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::CsrGraph;

/// Key offset separating window draws from walk draws under the same seed.
const WINDOW_KEY: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub walk_len: usize,
    pub walks_per_node: usize,
    pub window: usize,
    pub rng_seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walk_len: 80,
            walks_per_node: 10,
            window: 10,
            rng_seed: 1,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walk_len == 0 || self.walks_per_node == 0 || self.window == 0 {
            return Err(Error::InvalidConfig(format!(
                "walk_len, walks_per_node and window must be >= 1, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// `walks_per_node` walks from every node, round by round; walk `k` starts
/// at node `k % |V|` and draws from its own random stream.
pub fn simulate_walks(g: &CsrGraph, cfg: &WalkConfig) -> Result<Vec<Vec<usize>>> {
    cfg.validate()?;
    let n = g.num_nodes();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let starts: Vec<usize> = (0..n * cfg.walks_per_node).map(|k| k % n).collect();
    Ok(walks_from(g, &starts, cfg))
}

/// One walk per entry of `starts`; walk `k` uses stream `k`.
pub fn walks_from(g: &CsrGraph, starts: &[usize], cfg: &WalkConfig) -> Vec<Vec<usize>> {
    starts
        .par_iter()
        .enumerate()
        .map(|(k, &s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(k as u64);
            random_walk(g, s, cfg.walk_len, &mut rng)
        })
        .collect()
}

pub fn random_walk<R: Rng>(g: &CsrGraph, start: usize, len: usize, rng: &mut R) -> Vec<usize> {
    let mut walk = Vec::with_capacity(len);
    walk.push(start);
    let mut cur = start;
    while walk.len() < len {
        let nb = g.neighbors(cur);
        if nb.is_empty() {
            break;
        }
        cur = nb[rng.gen_range(0..nb.len())];
        walk.push(cur);
    }
    walk
}

/// Calls `emit(center, context)` for every pair of one walk. Each side of
/// each window gets its own extension drawn from `U(1, w)`, clipped at the
/// walk ends.
pub fn window_contexts<R: Rng>(
    walk: &[usize],
    window: usize,
    rng: &mut R,
    mut emit: impl FnMut(usize, usize),
) {
    let len = walk.len();
    for (i, &center) in walk.iter().enumerate() {
        let left = rng.gen_range(1..=window).min(i);
        let right = rng.gen_range(1..=window).min(len - 1 - i);
        for &c in &walk[i - left..i] {
            emit(center, c);
        }
        for &c in &walk[i + 1..=i + right] {
            emit(center, c);
        }
    }
}

/// Random stream for the window draws of walk `walk`.
pub(crate) fn window_rng(seed: u64, walk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ WINDOW_KEY);
    rng.set_stream(walk as u64);
    rng
}

/// All `(center, context)` pairs of all walks, in walk order.
pub fn all_window_pairs(walks: &[Vec<usize>], window: usize, rng_seed: u64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (k, walk) in walks.iter().enumerate() {
        window_contexts(walk, window, &mut window_rng(rng_seed, k), |a, b| {
            out.push((a, b))
        });
    }
    out
}

/// Number of pairs each node receives as center, without materializing them.
pub fn pairs_per_node(
    walks: &[Vec<usize>],
    num_nodes: usize,
    window: usize,
    rng_seed: u64,
) -> Vec<u64> {
    walks
        .par_iter()
        .enumerate()
        .fold(
            || vec![0u64; num_nodes],
            |mut acc, (k, walk)| {
                window_contexts(walk, window, &mut window_rng(rng_seed, k), |c, _| {
                    acc[c] += 1
                });
                acc
            },
        )
        .reduce(
            || vec![0u64; num_nodes],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Exact mean number of pairs per node produced by [`simulate_walks`] plus
/// [`window_contexts`] when no walk is cut short by an isolated node.
pub fn expected_pairs_per_node(walk_len: usize, walks_per_node: usize, window: usize) -> f64 {
    // E[min(U(1,w), m)] for the room m left on one side
    let side =
        |m: usize| -> f64 { (1..=window).map(|e| e.min(m) as f64).sum::<f64>() / window as f64 };
    let per_walk: f64 = (0..walk_len)
        .map(|i| side(i) + side(walk_len - 1 - i))
        .sum();
    walks_per_node as f64 * per_walk
}

/// One walk per line, nodes by external id.
pub fn write_walks(mut w: impl Write, walks: &[Vec<usize>], g: &CsrGraph) -> std::io::Result<()> {
    for walk in walks {
        let line: Vec<&str> = walk.iter().map(|&u| g.external_id(u)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}
