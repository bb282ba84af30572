//! Structural diagnostics: how far contexts reach from seeds of different
//! degree, how many training pairs each node gets, how classes sit in the
//! k-core hierarchy, and how per-class F1 differs between two runs.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alias::AliasTable;
use crate::appr::{compute_all_appr, compute_appr_with, ApprConfig, PushWorkspace};
use crate::error::{Error, Result};
use crate::eval::{spearman, EvalReport};
use crate::graph::{bfs_distances, k_core_decomposition, CsrGraph, LabelSet};
use crate::sgns::BatchGenerator;
use crate::walks::{pairs_per_node, simulate_walks, window_contexts, window_rng, WalkConfig};

/// Degree interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DegreeBucket {
    pub lo: usize,
    pub hi: usize,
}

impl DegreeBucket {
    pub fn contains(&self, d: usize) -> bool {
        self.lo <= d && d < self.hi
    }

    /// Half-open range notation, `lo..hi`.
    pub fn label(&self) -> String {
        format!("{}..{}", self.lo, self.hi)
    }
}

/// `[1,2), [2,4), [4,8), …` up to the bucket holding `max_degree`.
pub fn pow2_buckets(max_degree: usize) -> Vec<DegreeBucket> {
    if max_degree == 0 {
        return Vec::new();
    }
    (0..=bucket_index(max_degree))
        .map(|i| DegreeBucket {
            lo: 1 << i,
            hi: 1 << (i + 1),
        })
        .collect()
}

/// Index of the power-of-two bucket of degree `d ≥ 1`.
pub fn bucket_index(d: usize) -> usize {
    debug_assert!(d >= 1);
    (usize::BITS - 1 - d.leading_zeros()) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContextSource {
    Appr(ApprConfig),
    Walks(WalkConfig),
}

impl ContextSource {
    pub fn name(&self) -> &'static str {
        match self {
            ContextSource::Appr(_) => "appr",
            ContextSource::Walks(_) => "walks",
        }
    }

    fn describe(&self) -> String {
        match self {
            ContextSource::Appr(c) => format!("source=appr alpha={} delta={}", c.alpha, c.delta),
            ContextSource::Walks(c) => format!(
                "source=walks walk_len={} walks_per_node={} window={} walk_seed={}",
                c.walk_len, c.walks_per_node, c.window, c.rng_seed
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopProfileConfig {
    pub samples_per_bucket: usize,
    pub contexts_per_seed: usize,
    pub rng_seed: u64,
}

impl Default for HopProfileConfig {
    fn default() -> Self {
        HopProfileConfig {
            samples_per_bucket: 100,
            contexts_per_seed: 100,
            rng_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopRow {
    pub bucket: DegreeBucket,
    pub seeds: usize,
    pub contexts: usize,
    pub mean: f64,
    pub p25: usize,
    pub p50: usize,
    pub p75: usize,
    pub p95: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopProfile {
    pub config: String,
    pub rows: Vec<HopRow>,
    /// Hop distances of every sampled context, per sampled seed.
    pub raw: Vec<(usize, Vec<usize>)>,
    pub notes: Vec<String>,
}

/// Nearest-rank percentile of sorted data.
pub fn percentile(sorted: &[usize], q: f64) -> usize {
    assert!(!sorted.is_empty());
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

fn rng_for(seed: u64, key: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ key);
    r.set_stream(stream);
    r
}

fn sample_seeds(
    g: &CsrGraph,
    buckets: &[DegreeBucket],
    per_bucket: usize,
    rng_seed: u64,
) -> Vec<Vec<usize>> {
    buckets
        .iter()
        .enumerate()
        .map(|(b, bucket)| {
            let mut members: Vec<usize> = (0..g.num_nodes())
                .filter(|&u| bucket.contains(g.degree(u)))
                .collect();
            members.shuffle(&mut rng_for(rng_seed, 0xb0c4e7, b as u64));
            members.truncate(per_bucket);
            members.sort_unstable();
            members
        })
        .collect()
}

/// Hop distance (in the graph) from sampled seeds to contexts drawn from
/// `source`, summarized per degree bucket. The seed itself is never counted
/// as its own context.
pub fn hop_distance_profile(
    g: &CsrGraph,
    source: &ContextSource,
    buckets: &[DegreeBucket],
    cfg: &HopProfileConfig,
) -> Result<HopProfile> {
    if g.num_nodes() == 0 {
        return Err(Error::EmptyGraph);
    }
    let seeds_per_bucket = sample_seeds(g, buckets, cfg.samples_per_bucket, cfg.rng_seed);
    let seeds: Vec<usize> = seeds_per_bucket.iter().flatten().copied().collect();
    let contexts: Vec<Vec<usize>> = match source {
        ContextSource::Appr(acfg) => appr_contexts(g, &seeds, acfg, cfg)?,
        ContextSource::Walks(wcfg) => walk_contexts(g, &seeds, wcfg, cfg)?,
    };
    let raw: Vec<(usize, Vec<usize>)> = seeds
        .par_iter()
        .zip(contexts)
        .map(|(&s, ctx)| {
            let dist = bfs_distances(g, s);
            (s, ctx.into_iter().map(|c| dist[c]).collect())
        })
        .collect();

    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut offset = 0;
    for (bucket, members) in buckets.iter().zip(&seeds_per_bucket) {
        let slice = &raw[offset..offset + members.len()];
        offset += members.len();
        let mut hops: Vec<usize> = slice.iter().flat_map(|(_, h)| h.iter().copied()).collect();
        if hops.is_empty() {
            notes.push(format!(
                "bucket {} has no seeds or no contexts; omitted",
                bucket.label()
            ));
            continue;
        }
        hops.sort_unstable();
        rows.push(HopRow {
            bucket: *bucket,
            seeds: members.len(),
            contexts: hops.len(),
            mean: hops.iter().sum::<usize>() as f64 / hops.len() as f64,
            p25: percentile(&hops, 0.25),
            p50: percentile(&hops, 0.50),
            p75: percentile(&hops, 0.75),
            p95: percentile(&hops, 0.95),
            max: *hops.last().unwrap(),
        });
    }
    Ok(HopProfile {
        config: format!(
            "hop_distance_profile {} samples_per_bucket={} contexts_per_seed={} seed={}",
            source.describe(),
            cfg.samples_per_bucket,
            cfg.contexts_per_seed,
            cfg.rng_seed
        ),
        rows,
        raw,
        notes,
    })
}

fn appr_contexts(
    g: &CsrGraph,
    seeds: &[usize],
    acfg: &ApprConfig,
    cfg: &HopProfileConfig,
) -> Result<Vec<Vec<usize>>> {
    let n = g.num_nodes();
    seeds
        .par_iter()
        .map_init(
            || PushWorkspace::new(n),
            |ws, &s| {
                let v = compute_appr_with(g, s, acfg, ws)?;
                let (support, weights): (Vec<usize>, Vec<f64>) =
                    v.entries.iter().copied().filter(|&(u, _)| u != s).unzip();
                let table = AliasTable::new(s, support, &weights)?;
                let mut rng = rng_for(cfg.rng_seed, 0xa99a, s as u64);
                Ok(table.sample(cfg.contexts_per_seed, &mut rng))
            },
        )
        .collect()
}

/// Contexts of each seed over the whole walk corpus, subsampled uniformly
/// with a reservoir per seed.
fn walk_contexts(
    g: &CsrGraph,
    seeds: &[usize],
    wcfg: &WalkConfig,
    cfg: &HopProfileConfig,
) -> Result<Vec<Vec<usize>>> {
    let walks = simulate_walks(g, wcfg)?;
    let mut slot = vec![usize::MAX; g.num_nodes()];
    for (i, &s) in seeds.iter().enumerate() {
        slot[s] = i;
    }
    let cap = cfg.contexts_per_seed;
    let mut reservoirs: Vec<Vec<usize>> = vec![Vec::with_capacity(cap); seeds.len()];
    let mut seen = vec![0usize; seeds.len()];
    let mut pick = rng_for(cfg.rng_seed, 0x3e5e_7a11, 0);
    for (k, walk) in walks.iter().enumerate() {
        let mut wrng = window_rng(wcfg.rng_seed, k);
        window_contexts(walk, wcfg.window, &mut wrng, |center, ctx| {
            let i = slot[center];
            if i == usize::MAX || ctx == center {
                return;
            }
            seen[i] += 1;
            if reservoirs[i].len() < cap {
                reservoirs[i].push(ctx);
            } else {
                let j = pick.gen_range(0..seen[i]);
                if j < cap {
                    reservoirs[i][j] = ctx;
                }
            }
        });
    }
    Ok(reservoirs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRow {
    pub bucket: DegreeBucket,
    pub nodes: usize,
    pub mean: f64,
    pub std: f64,
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceProfile {
    pub config: String,
    pub rows: Vec<InstanceRow>,
    /// Pairs with each node as seed (or walk center).
    pub per_node: Vec<u64>,
    /// Spearman correlation of `per_node` with degree over non-isolated nodes.
    pub degree_correlation: f64,
}

/// Training pairs per node. The APPR source runs the batch generator with
/// 10 pairs per seed per batch for `budget_per_node / 10` batches; the walk
/// source counts window pairs over the simulated corpus.
pub fn instances_per_degree(
    g: &CsrGraph,
    source: &ContextSource,
    buckets: &[DegreeBucket],
    budget_per_node: usize,
    rng_seed: u64,
) -> Result<InstanceProfile> {
    let n = g.num_nodes();
    let per_node = match source {
        ContextSource::Appr(acfg) => {
            let batch = compute_all_appr(g, acfg)?;
            let samplers = batch
                .vectors
                .iter()
                .map(AliasTable::from_appr)
                .collect::<Result<Vec<_>>>()?;
            let per_batch = 10;
            let batches = budget_per_node / per_batch;
            let mut gen = BatchGenerator::new(samplers, per_batch * batch.vectors.len(), rng_seed)?;
            let mut counts = vec![0u64; n];
            for _ in 0..batches {
                for (s, _) in gen.next_batch().pairs {
                    counts[s] += 1;
                }
            }
            counts
        }
        ContextSource::Walks(wcfg) => {
            let walks = simulate_walks(g, wcfg)?;
            pairs_per_node(&walks, n, wcfg.window, wcfg.rng_seed)
        }
    };
    let active: Vec<usize> = (0..n).filter(|&u| g.degree(u) > 0).collect();
    let deg: Vec<f64> = active.iter().map(|&u| g.degree(u) as f64).collect();
    let cnt: Vec<f64> = active.iter().map(|&u| per_node[u] as f64).collect();
    let degree_correlation = spearman(&cnt, &deg);
    let mut rows = Vec::new();
    for bucket in buckets {
        let vals: Vec<u64> = active
            .iter()
            .filter(|&&u| bucket.contains(g.degree(u)))
            .map(|&u| per_node[u])
            .collect();
        if vals.is_empty() {
            continue;
        }
        let mean = vals.iter().sum::<u64>() as f64 / vals.len() as f64;
        let var = vals.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / vals.len() as f64;
        rows.push(InstanceRow {
            bucket: *bucket,
            nodes: vals.len(),
            mean,
            std: var.sqrt(),
            min: *vals.iter().min().unwrap(),
            max: *vals.iter().max().unwrap(),
        });
    }
    Ok(InstanceProfile {
        config: format!(
            "instances_per_degree {} budget_per_node={budget_per_node} seed={rng_seed}",
            source.describe()
        ),
        rows,
        per_node,
        degree_correlation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KcoreRow {
    pub class: usize,
    pub k: usize,
    pub core_size: usize,
    pub fraction_core: f64,
    pub fraction_graph: f64,
    pub ratio: f64,
    /// `None` where the ratio is zero (a break in the plotted line).
    pub log_ratio: Option<f64>,
}

/// For every core order `k` present and every class `i`: the share of
/// class `i` among labeled nodes of the k-core, divided by its share among
/// all labeled nodes.
pub fn kcore_class_profile(g: &CsrGraph, labels: &LabelSet) -> Result<Vec<KcoreRow>> {
    if labels.num_nodes() != g.num_nodes() {
        return Err(Error::DimensionMismatch(labels.num_nodes(), g.num_nodes()));
    }
    let labeled = labels.labeled_nodes();
    if labeled.is_empty() {
        return Err(Error::NoUsableClasses);
    }
    let core = k_core_decomposition(g);
    let mut ks: Vec<usize> = core.clone();
    ks.sort_unstable();
    ks.dedup();
    let k_classes = labels.num_classes();
    let global: Vec<f64> = {
        let mut c = vec![0usize; k_classes];
        for &u in &labeled {
            labels.labels(u).iter().for_each(|&l| c[l] += 1);
        }
        c.iter().map(|&x| x as f64 / labeled.len() as f64).collect()
    };
    let mut rows = Vec::new();
    for &k in &ks {
        let inside: Vec<usize> = labeled.iter().copied().filter(|&u| core[u] >= k).collect();
        let mut counts = vec![0usize; k_classes];
        for &u in &inside {
            labels.labels(u).iter().for_each(|&l| counts[l] += 1);
        }
        for class in 0..k_classes {
            if global[class] == 0.0 {
                continue;
            }
            let fraction_core = if inside.is_empty() {
                0.0
            } else {
                counts[class] as f64 / inside.len() as f64
            };
            let ratio = fraction_core / global[class];
            rows.push(KcoreRow {
                class,
                k,
                core_size: inside.len(),
                fraction_core,
                fraction_graph: global[class],
                ratio,
                log_ratio: (ratio > 0.0).then(|| ratio.ln()),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaRow {
    pub class: usize,
    pub name: String,
    pub size: usize,
    /// `F1(a) − F1(b)`; `None` when either report skipped the class.
    pub delta: Option<f64>,
}

pub fn per_class_f1_delta(
    a: &EvalReport,
    b: &EvalReport,
    labels: &LabelSet,
) -> Result<Vec<DeltaRow>> {
    if a.class_names != b.class_names {
        return Err(Error::MismatchedClasses(format!(
            "{} vs {} classes or different names",
            a.num_classes(),
            b.num_classes()
        )));
    }
    if a.num_classes() != labels.num_classes() {
        return Err(Error::MismatchedClasses(format!(
            "reports have {} classes, labels {}",
            a.num_classes(),
            labels.num_classes()
        )));
    }
    let sizes = labels.class_sizes();
    Ok((0..a.num_classes())
        .map(|c| DeltaRow {
            class: c,
            name: a.class_names[c].clone(),
            size: sizes[c],
            delta: match (a.per_class_f1[c], b.per_class_f1[c]) {
                (Some(x), Some(y)) => Some(x - y),
                _ => None,
            },
        })
        .collect())
}

/// Long-format CSV: a `# config` line, then `key,statistic,value` rows.
pub fn write_csv(
    mut w: impl Write,
    config: &str,
    rows: &[(String, &str, String)],
) -> std::io::Result<()> {
    writeln!(w, "# {config}")?;
    writeln!(w, "key,statistic,value")?;
    for (k, s, v) in rows {
        writeln!(w, "{k},{s},{v}")?;
    }
    Ok(())
}

impl HopProfile {
    pub fn csv_rows(&self, include_raw: bool) -> Vec<(String, &'static str, String)> {
        let mut out = Vec::new();
        for r in &self.rows {
            let k = r.bucket.label();
            out.push((k.clone(), "seeds", r.seeds.to_string()));
            out.push((k.clone(), "contexts", r.contexts.to_string()));
            out.push((k.clone(), "mean", r.mean.to_string()));
            out.push((k.clone(), "p25", r.p25.to_string()));
            out.push((k.clone(), "p50", r.p50.to_string()));
            out.push((k.clone(), "p75", r.p75.to_string()));
            out.push((k.clone(), "p95", r.p95.to_string()));
            out.push((k, "max", r.max.to_string()));
        }
        if include_raw {
            for (s, hops) in &self.raw {
                for h in hops {
                    out.push((format!("seed{s}"), "hop", h.to_string()));
                }
            }
        }
        out
    }
}

impl InstanceProfile {
    pub fn csv_rows(&self) -> Vec<(String, &'static str, String)> {
        let mut out = Vec::new();
        for r in &self.rows {
            let k = r.bucket.label();
            out.push((k.clone(), "nodes", r.nodes.to_string()));
            out.push((k.clone(), "mean", r.mean.to_string()));
            out.push((k.clone(), "std", r.std.to_string()));
            out.push((k.clone(), "min", r.min.to_string()));
            out.push((k, "max", r.max.to_string()));
        }
        out.push((
            "all".into(),
            "spearman_degree",
            self.degree_correlation.to_string(),
        ));
        out
    }
}

pub fn kcore_csv_rows(rows: &[KcoreRow], labels: &LabelSet) -> Vec<(String, &'static str, String)> {
    let mut out = Vec::new();
    for r in rows {
        let key = format!("class={} k={}", labels.class_name(r.class), r.k);
        out.push((key.clone(), "ratio", r.ratio.to_string()));
        out.push((
            key,
            "log_ratio",
            r.log_ratio
                .map_or_else(|| "break".to_string(), |x| x.to_string()),
        ));
    }
    out
}

pub fn delta_csv_rows(rows: &[DeltaRow]) -> Vec<(String, &'static str, String)> {
    let mut out = Vec::new();
    for r in rows {
        out.push((r.name.clone(), "size", r.size.to_string()));
        out.push((
            r.name.clone(),
            "f1_delta",
            r.delta
                .map_or_else(|| "skipped".to_string(), |x| x.to_string()),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn buckets() {
        assert_eq!(bucket_index(1), 0);
        assert_eq!(bucket_index(3), 1);
        assert_eq!(bucket_index(4), 2);
        let b = pow2_buckets(9);
        assert_eq!(b.len(), 4);
        assert_eq!(b[3], DegreeBucket { lo: 8, hi: 16 });
        assert!(pow2_buckets(0).is_empty());
    }

    #[test]
    fn percentiles() {
        let x = [1, 2, 3, 4];
        assert_eq!(percentile(&x, 0.5), 2);
        assert_eq!(percentile(&x, 0.95), 4);
        assert_eq!(percentile(&x, 0.0), 1);
    }

    #[test]
    fn star_center_contexts_are_adjacent() {
        let g = generators::star(20);
        let buckets = pow2_buckets(20);
        let p = hop_distance_profile(
            &g,
            &ContextSource::Appr(ApprConfig::default()),
            &buckets,
            &HopProfileConfig::default(),
        )
        .unwrap();
        let center = p.raw.iter().find(|(s, _)| *s == 0).unwrap();
        assert!(center.1.iter().all(|&h| h == 1));
        // leaves see the center and, through it, the other leaves
        assert!(p
            .raw
            .iter()
            .filter(|(s, _)| *s != 0)
            .all(|(_, h)| h.iter().all(|&x| x == 1 || x == 2)));
    }

    #[test]
    fn walk_source_reaches_far_on_a_path() {
        let edges: Vec<(usize, usize)> = (0..59).map(|i| (i, i + 1)).collect();
        let g = CsrGraph::from_edges_unchecked(60, &edges);
        let src = ContextSource::Walks(WalkConfig {
            walk_len: 40,
            walks_per_node: 2,
            window: 10,
            rng_seed: 3,
        });
        let p =
            hop_distance_profile(&g, &src, &pow2_buckets(2), &HopProfileConfig::default()).unwrap();
        assert!(p.rows.iter().any(|r| r.max > 3));
    }

    #[test]
    fn appr_counts_are_uniform() {
        let (g, _) = generators::karate_club();
        let b = pow2_buckets(17);
        let p = instances_per_degree(&g, &ContextSource::Appr(ApprConfig::default()), &b, 870, 1)
            .unwrap();
        assert!(p.per_node.iter().all(|&c| c == 870));
        assert!(p.rows.iter().all(|r| r.std == 0.0));
    }

    #[test]
    fn kcore_uniform_and_pendant_classes() {
        // triangle 0-1-2 with pendants 3, 4 hanging off 0
        let g = CsrGraph::from_edges_unchecked(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)]);
        let labels = LabelSet::new(vec![vec![0], vec![0], vec![0], vec![1], vec![1]], 2).unwrap();
        let rows = kcore_class_profile(&g, &labels).unwrap();
        let at = |c, k| {
            rows.iter()
                .find(|r| r.class == c && r.k == k)
                .unwrap()
                .clone()
        };
        assert_eq!(at(0, 1).ratio, 1.0);
        assert_eq!(at(1, 1).ratio, 1.0);
        assert_eq!(at(1, 2).ratio, 0.0);
        assert_eq!(at(1, 2).log_ratio, None);
        // class 0 is exactly the max core: ratio = 1 / F_G
        assert!((at(0, 2).ratio - 1.0 / 0.6).abs() < 1e-12);

        let uniform = LabelSet::new(vec![vec![0]; 5], 1).unwrap();
        assert!(kcore_class_profile(&g, &uniform)
            .unwrap()
            .iter()
            .all(|r| r.ratio == 1.0));
    }

    #[test]
    fn deltas() {
        let labels = LabelSet::from_assignment(&[0, 1, 1]);
        let mut a = EvalReport::new("x");
        a.class_names = vec!["0".into(), "1".into()];
        a.per_class_f1 = vec![Some(1.0), Some(1.0)];
        let mut b = a.clone();
        assert!(per_class_f1_delta(&a, &b, &labels)
            .unwrap()
            .iter()
            .all(|r| r.delta == Some(0.0)));
        b.per_class_f1 = vec![Some(0.0), Some(0.0)];
        let rows = per_class_f1_delta(&a, &b, &labels).unwrap();
        assert!(rows.iter().all(|r| r.delta == Some(1.0)));
        assert_eq!(rows[1].size, 2);
        b.class_names.pop();
        b.per_class_f1.pop();
        assert!(matches!(
            per_class_f1_delta(&a, &b, &labels),
            Err(Error::MismatchedClasses(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(
            &mut buf,
            "cfg",
            &[(DegreeBucket { lo: 1, hi: 2 }.label(), "p50", "1".into())],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# cfg\nkey,statistic,value\n1..2,p50,1\n"
        );
    }
}
