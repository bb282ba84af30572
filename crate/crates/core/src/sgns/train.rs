use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::step::{log_sigmoid, sigmoid, step_in_place};
use super::{BatchGenerator, EmbeddingMatrix, NoiseDistribution, TrainConfig};
use crate::alias::AliasTable;
use crate::appr::ApprVector;
use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::matrix::{dot, Matrix};

const PLATEAU_WINDOW: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub batch_size: usize,
    pub max_batches: usize,
    pub batches_run: usize,
    pub pairs_per_seed_per_batch: usize,
    pub num_samplers: usize,
    /// Mean per-pair loss of each batch.
    pub batch_losses: Vec<f64>,
    pub stopped_on_plateau: bool,
}

impl TrainReport {
    pub fn pairs_per_seed(&self) -> usize {
        self.batches_run * self.pairs_per_seed_per_batch
    }
}

#[derive(Debug, Clone)]
pub struct Trained {
    pub embeddings: EmbeddingMatrix,
    pub report: TrainReport,
}

pub fn train_on_graph(g: &CsrGraph, apprs: &[ApprVector], cfg: &TrainConfig) -> Result<Trained> {
    train(&g.degrees(), apprs, cfg)
}

/// Learns embeddings for `degrees.len()` nodes from the given APPR vectors.
///
/// `degrees` only shapes the noise distribution, which lets training run
/// from an APPR sidecar without the edge list.
pub fn train(degrees: &[usize], apprs: &[ApprVector], cfg: &TrainConfig) -> Result<Trained> {
    cfg.validate()?;
    if apprs.is_empty() {
        return Err(Error::InvalidConfig("empty APPR list".into()));
    }
    let n = degrees.len();
    let mut samplers = Vec::with_capacity(apprs.len());
    for v in apprs {
        if v.seed >= n || v.entries.iter().any(|&(u, _)| u >= n) {
            return Err(Error::InvalidNode(v.seed));
        }
        samplers.push(AliasTable::from_appr(v)?);
    }
    let num_samplers = samplers.len();
    let (batch_size, max_batches) = cfg.resolve_schedule(n, num_samplers)?;
    let noise = noise_table(degrees, cfg.noise)?;

    let mut init_rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    init_rng.set_stream(u64::MAX);
    let mut emb = EmbeddingMatrix::random(n, cfg.dim, &mut init_rng);
    let mut neg_rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    neg_rng.set_stream(u64::MAX - 1);

    let mut gen = BatchGenerator::new(samplers, batch_size, cfg.rng_seed)?;
    let per_seed = gen.pairs_per_seed();
    let total_pairs = (max_batches * per_seed * num_samplers).max(1);
    let schedule = LrSchedule {
        initial: cfg.lr_initial,
        last: cfg.lr_final,
        total: total_pairs as f64,
    };

    let mut report = TrainReport {
        batch_size,
        max_batches,
        batches_run: 0,
        pairs_per_seed_per_batch: per_seed,
        num_samplers,
        batch_losses: Vec::with_capacity(max_batches),
        stopped_on_plateau: false,
    };
    let mut plateau = cfg.plateau_tolerance.map(Plateau::new);
    let mut shared = (cfg.threads > 1).then(|| SharedEmbedding::from_matrix(&emb));
    let mut done = 0usize;

    for batch_no in 0..max_batches {
        let batch = gen.next_batch();
        let mean_loss = match &shared {
            None => {
                let mut scratch = vec![0.0; cfg.dim];
                let mut negs = vec![0usize; cfg.negatives];
                let mut sum = 0.0;
                for (i, &(s, c)) in batch.pairs.iter().enumerate() {
                    draw_negatives(&noise, c, &mut neg_rng, &mut negs);
                    let lr = schedule.at(done + i);
                    sum += step_in_place(&mut emb, s, c, &negs, lr, &mut scratch)?;
                }
                sum / batch.pairs.len().max(1) as f64
            }
            Some(sh) => hogwild_batch(sh, &batch.pairs, &noise, cfg, batch_no, done, &schedule)?,
        };
        done += batch.pairs.len();
        report.batch_losses.push(mean_loss);
        report.batches_run += 1;
        if let Some(p) = plateau.as_mut() {
            if p.observe(mean_loss) {
                report.stopped_on_plateau = true;
                break;
            }
        }
    }
    if let Some(sh) = shared.take() {
        emb = sh.into_matrix();
    }
    if !emb.is_finite() {
        return Err(Error::Numerical(
            "non-finite embeddings after training".into(),
        ));
    }
    Ok(Trained {
        embeddings: emb,
        report,
    })
}

fn noise_table(degrees: &[usize], noise: NoiseDistribution) -> Result<AliasTable> {
    let n = degrees.len();
    match noise {
        NoiseDistribution::Uniform => AliasTable::uniform(n),
        NoiseDistribution::DegreePower(e) => {
            let w: Vec<f64> = degrees
                .iter()
                .map(|&d| if d == 0 { 0.0 } else { (d as f64).powf(e) })
                .collect();
            AliasTable::new(0, (0..n).collect(), &w)
        }
    }
}

/// A negative equal to the positive context is redrawn once, then kept.
#[inline]
fn draw_negatives<R: Rng>(noise: &AliasTable, positive: usize, rng: &mut R, out: &mut [usize]) {
    for slot in out.iter_mut() {
        let mut x = noise.draw(rng);
        if x == positive {
            x = noise.draw(rng);
        }
        *slot = x;
    }
}

struct LrSchedule {
    initial: f64,
    last: f64,
    total: f64,
}

impl LrSchedule {
    #[inline]
    fn at(&self, done: usize) -> f64 {
        let frac = (done as f64 / self.total).min(1.0);
        self.initial + (self.last - self.initial) * frac
    }
}

struct Plateau {
    tol: f64,
    window: VecDeque<f64>,
    sum: f64,
    prev_avg: Option<f64>,
}

impl Plateau {
    fn new(tol: f64) -> Self {
        Plateau {
            tol,
            window: VecDeque::with_capacity(PLATEAU_WINDOW),
            sum: 0.0,
            prev_avg: None,
        }
    }

    fn observe(&mut self, loss: f64) -> bool {
        self.window.push_back(loss);
        self.sum += loss;
        if self.window.len() > PLATEAU_WINDOW {
            self.sum -= self.window.pop_front().unwrap();
        }
        if self.window.len() < PLATEAU_WINDOW {
            return false;
        }
        let avg = self.sum / PLATEAU_WINDOW as f64;
        let flat = self
            .prev_avg
            .is_some_and(|p| ((avg - p) / p.abs().max(f64::MIN_POSITIVE)).abs() < self.tol);
        self.prev_avg = Some(avg);
        flat
    }
}

/// Embedding arrays stored as `f64` bit patterns in atomics so workers can
/// read and write rows without locks. Concurrent writes to the same row may
/// overwrite each other; that loss is accepted.
struct SharedEmbedding {
    dim: usize,
    input: Vec<AtomicU64>,
    context: Vec<AtomicU64>,
}

impl SharedEmbedding {
    fn from_matrix(m: &EmbeddingMatrix) -> Self {
        let wrap = |x: &Matrix| {
            x.as_slice()
                .iter()
                .map(|v| AtomicU64::new(v.to_bits()))
                .collect()
        };
        SharedEmbedding {
            dim: m.dim(),
            input: wrap(&m.input),
            context: wrap(&m.context),
        }
    }

    fn into_matrix(self) -> EmbeddingMatrix {
        let rows = self.input.len() / self.dim.max(1);
        let unwrap = |v: Vec<AtomicU64>| {
            Matrix::from_vec(
                rows,
                self.dim,
                v.into_iter()
                    .map(|a| f64::from_bits(a.into_inner()))
                    .collect(),
            )
        };
        EmbeddingMatrix {
            input: unwrap(self.input),
            context: unwrap(self.context),
        }
    }

    #[inline]
    fn load(arr: &[AtomicU64], row: usize, dim: usize, out: &mut [f64]) {
        for (o, a) in out.iter_mut().zip(&arr[row * dim..(row + 1) * dim]) {
            *o = f64::from_bits(a.load(Ordering::Relaxed));
        }
    }

    #[inline]
    fn store(arr: &[AtomicU64], row: usize, dim: usize, vals: &[f64]) {
        for (v, a) in vals.iter().zip(&arr[row * dim..(row + 1) * dim]) {
            a.store(v.to_bits(), Ordering::Relaxed);
        }
    }
}

fn hogwild_batch(
    sh: &SharedEmbedding,
    pairs: &[(usize, usize)],
    noise: &AliasTable,
    cfg: &TrainConfig,
    batch_no: usize,
    done: usize,
    schedule: &LrSchedule,
) -> Result<f64> {
    let workers = cfg.threads;
    let chunk = pairs.len().div_ceil(workers).max(1);
    let dim = sh.dim;
    let sums: Vec<Result<f64>> = pairs
        .par_chunks(chunk)
        .enumerate()
        .map(|(w, part)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x5851_f42d_4c95_7f2d);
            rng.set_stream((batch_no * workers + w) as u64);
            let mut negs = vec![0usize; cfg.negatives];
            let mut u = vec![0.0; dim];
            let mut c = vec![0.0; dim];
            let mut grad = vec![0.0; dim];
            let mut sum = 0.0;
            for (i, &(s, ctx)) in part.iter().enumerate() {
                draw_negatives(noise, ctx, &mut rng, &mut negs);
                let lr = schedule.at(done + i * workers);
                SharedEmbedding::load(&sh.input, s, dim, &mut u);
                grad.iter_mut().for_each(|x| *x = 0.0);
                let targets = std::iter::once((ctx, 1.0)).chain(negs.iter().map(|&n| (n, 0.0)));
                for (t, label) in targets {
                    SharedEmbedding::load(&sh.context, t, dim, &mut c);
                    let score = dot(&u, &c);
                    sum -= if label > 0.0 {
                        log_sigmoid(score)
                    } else {
                        log_sigmoid(-score)
                    };
                    let g = lr * (label - sigmoid(score));
                    for ((gi, ci), ui) in grad.iter_mut().zip(c.iter_mut()).zip(&u) {
                        *gi += g * *ci;
                        *ci += g * ui;
                    }
                    SharedEmbedding::store(&sh.context, t, dim, &c);
                }
                for (ui, gi) in u.iter_mut().zip(&grad) {
                    *ui += gi;
                }
                if u.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Numerical(format!("non-finite update for seed {s}")));
                }
                SharedEmbedding::store(&sh.input, s, dim, &u);
            }
            Ok(sum)
        })
        .collect();
    let mut total = 0.0;
    for s in sums {
        total += s?;
    }
    Ok(total / pairs.len().max(1) as f64)
}
