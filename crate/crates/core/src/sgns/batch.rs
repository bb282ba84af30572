use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::error::{Error, Result};

/// Shuffled `(seed, neighbor)` pairs; every sampler contributed the same
/// number of pairs before shuffling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingBatch {
    pub pairs: Vec<(usize, usize)>,
    pub pairs_per_seed: usize,
}

/// One batch from a single random stream: `batch_size / |samplers|` draws
/// per sampler (remainder dropped), then a uniform shuffle.
pub fn generate_batch<R: Rng>(
    samplers: &[AliasTable],
    batch_size: usize,
    rng: &mut R,
) -> Result<TrainingBatch> {
    let per_seed = pairs_per_seed(samplers.len(), batch_size)?;
    let mut pairs = Vec::with_capacity(per_seed * samplers.len());
    for s in samplers {
        for _ in 0..per_seed {
            pairs.push((s.seed(), s.draw(rng)));
        }
    }
    pairs.shuffle(rng);
    Ok(TrainingBatch {
        pairs,
        pairs_per_seed: per_seed,
    })
}

fn pairs_per_seed(num_samplers: usize, batch_size: usize) -> Result<usize> {
    if num_samplers == 0 {
        return Err(Error::InvalidConfig("no samplers".into()));
    }
    if batch_size < num_samplers {
        return Err(Error::InvalidConfig(format!(
            "batch_size {batch_size} < {num_samplers} samplers"
        )));
    }
    Ok(batch_size / num_samplers)
}

/// Batch stream with one random stream per seed node, so neighbor draws can
/// run in parallel and still be reproducible.
pub struct BatchGenerator {
    samplers: Vec<AliasTable>,
    per_seed: usize,
    seed_rngs: Vec<ChaCha8Rng>,
    shuffle_rng: ChaCha8Rng,
}

impl BatchGenerator {
    pub fn new(samplers: Vec<AliasTable>, batch_size: usize, rng_seed: u64) -> Result<Self> {
        let per_seed = pairs_per_seed(samplers.len(), batch_size)?;
        let seed_rngs = samplers
            .iter()
            .map(|s| {
                let mut r = ChaCha8Rng::seed_from_u64(rng_seed);
                // stream 0 is reserved for the shuffle
                r.set_stream(s.seed() as u64 + 1);
                r
            })
            .collect();
        let mut shuffle_rng = ChaCha8Rng::seed_from_u64(rng_seed);
        shuffle_rng.set_stream(0);
        Ok(BatchGenerator {
            samplers,
            per_seed,
            seed_rngs,
            shuffle_rng,
        })
    }

    pub fn pairs_per_seed(&self) -> usize {
        self.per_seed
    }

    pub fn samplers(&self) -> &[AliasTable] {
        &self.samplers
    }

    pub fn next_batch(&mut self) -> TrainingBatch {
        let per_seed = self.per_seed;
        let chunks: Vec<Vec<(usize, usize)>> = self
            .samplers
            .par_iter()
            .zip(self.seed_rngs.par_iter_mut())
            .map(|(s, rng)| (0..per_seed).map(|_| (s.seed(), s.draw(rng))).collect())
            .collect();
        let mut pairs: Vec<(usize, usize)> = chunks.into_iter().flatten().collect();
        pairs.shuffle(&mut self.shuffle_rng);
        TrainingBatch {
            pairs,
            pairs_per_seed: per_seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn samplers(n: usize) -> Vec<AliasTable> {
        (0..n)
            .map(|s| AliasTable::new(s, vec![(s + 1) % n, (s + 2) % n], &[0.7, 0.3]).unwrap())
            .collect()
    }

    fn per_seed_counts(b: &TrainingBatch) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for &(s, _) in &b.pairs {
            *m.entry(s).or_default() += 1;
        }
        m
    }

    #[test]
    fn two_samplers_four_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = generate_batch(&samplers(2), 4, &mut rng).unwrap();
        assert_eq!(b.pairs.len(), 4);
        assert!(per_seed_counts(&b).values().all(|&c| c == 2));
    }

    #[test]
    fn remainder_dropped() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let b = generate_batch(&samplers(3), 10, &mut rng).unwrap();
        assert_eq!(b.pairs.len(), 9);
        assert_eq!(b.pairs_per_seed, 3);
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(generate_batch(&[], 4, &mut rng).is_err());
        assert!(generate_batch(&samplers(3), 2, &mut rng).is_err());
    }

    #[test]
    fn generator_is_reproducible_across_pools() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let mut g = BatchGenerator::new(samplers(50), 500, 9).unwrap();
                (0..3).map(|_| g.next_batch()).collect::<Vec<_>>()
            })
        };
        let a = run(1);
        assert_eq!(a, run(4));
        assert_ne!(a[0], a[1]);
        for b in &a {
            assert!(per_seed_counts(b).values().all(|&c| c == 10));
        }
    }
}
