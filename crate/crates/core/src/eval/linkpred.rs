//! Link prediction: hide a share of the edges, embed the rest, and rank
//! hidden edges against sampled non-edges.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::logreg::{logreg_fit, LogRegConfig};
use super::metrics::auc;
use super::report::EvalReport;
use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::matrix::{dot, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeOperator {
    Average,
    Hadamard,
    L1,
    L2,
}

impl EdgeOperator {
    pub const ALL: [EdgeOperator; 4] = [
        EdgeOperator::Average,
        EdgeOperator::Hadamard,
        EdgeOperator::L1,
        EdgeOperator::L2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeOperator::Average => "average",
            EdgeOperator::Hadamard => "hadamard",
            EdgeOperator::L1 => "l1",
            EdgeOperator::L2 => "l2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown edge operator {s:?}")))
    }

    #[inline]
    fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            EdgeOperator::Average => (a + b) / 2.0,
            EdgeOperator::Hadamard => a * b,
            EdgeOperator::L1 => (a - b).abs(),
            EdgeOperator::L2 => (a - b) * (a - b),
        }
    }
}

pub fn edge_embed(u: &[f64], v: &[f64], op: EdgeOperator) -> Result<Vec<f64>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(u.len(), v.len()));
    }
    Ok(u.iter().zip(v).map(|(&a, &b)| op.apply(a, b)).collect())
}

fn pair_features(emb: &Matrix, pairs: &[(usize, usize)], op: EdgeOperator) -> Matrix {
    let d = emb.cols();
    let mut data = Vec::with_capacity(pairs.len() * d);
    for &(u, v) in pairs {
        data.extend(
            emb.row(u)
                .iter()
                .zip(emb.row(v))
                .map(|(&a, &b)| op.apply(a, b)),
        );
    }
    Matrix::from_vec(pairs.len(), d, data)
}

/// Removes edges in random order, skipping any removal that would leave an
/// endpoint without edges, until `ceil((1 − holdout)·|E|)` edges remain.
pub fn remove_edges<R: Rng>(
    g: &CsrGraph,
    holdout: f64,
    rng: &mut R,
) -> Result<(CsrGraph, Vec<(usize, usize)>)> {
    if !(holdout > 0.0 && holdout < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "holdout must be in (0, 1), got {holdout}"
        )));
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    let m = edges.len();
    let keep = residual_edge_count(m, holdout);
    let target = m - keep;
    edges.shuffle(rng);
    let mut deg = g.degrees();
    let mut removed = Vec::with_capacity(target);
    let mut kept = Vec::with_capacity(keep);
    for (u, v) in edges {
        if removed.len() < target && deg[u] > 1 && deg[v] > 1 {
            deg[u] -= 1;
            deg[v] -= 1;
            removed.push((u, v));
        } else {
            kept.push((u, v));
        }
    }
    if removed.len() < target {
        return Err(Error::HoldoutInfeasible(format!(
            "only {} of {target} edges can be removed without isolating a node",
            removed.len()
        )));
    }
    Ok((g.with_edges(&kept), removed))
}

/// `ceil((1 − holdout)·m)`, robust to rounding in `1 − holdout`.
pub fn residual_edge_count(m: usize, holdout: f64) -> usize {
    (((1.0 - holdout) * m as f64) - 1e-9).ceil().max(0.0) as usize
}

/// `count` distinct node pairs that are not edges of `g` and not in
/// `exclude`; pairs are stored as `(min, max)`.
pub fn sample_non_edges<R: Rng>(
    g: &CsrGraph,
    count: usize,
    exclude: &HashSet<(usize, usize)>,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    let n = g.num_nodes();
    let possible = (n * n.saturating_sub(1) / 2).saturating_sub(g.num_edges() + exclude.len());
    if count > possible {
        return Err(Error::HoldoutInfeasible(format!(
            "need {count} non-edges, at most {possible} exist"
        )));
    }
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let p = (a.min(b), a.max(b));
        if g.has_edge(p.0, p.1) || exclude.contains(&p) || !seen.insert(p) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}

/// Positive and negative pairs for training and testing.
#[derive(Debug, Clone)]
pub struct HoldoutSplit {
    pub residual: CsrGraph,
    pub removed: Vec<(usize, usize)>,
    pub train_negatives: Vec<(usize, usize)>,
    pub test_negatives: Vec<(usize, usize)>,
}

pub fn holdout_split(g: &CsrGraph, holdout: f64, rng_seed: u64) -> Result<HoldoutSplit> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (residual, removed) = remove_edges(g, holdout, &mut rng)?;
    let train_negatives = sample_non_edges(g, residual.num_edges(), &HashSet::new(), &mut rng)?;
    let used: HashSet<(usize, usize)> = train_negatives.iter().copied().collect();
    let test_negatives = sample_non_edges(g, removed.len(), &used, &mut rng)?;
    Ok(HoldoutSplit {
        residual,
        removed,
        train_negatives,
        test_negatives,
    })
}

/// Cosine k-nearest-neighbor lists for a subset of nodes.
#[derive(Debug, Clone)]
pub struct KnnIndex {
    k: usize,
    lists: std::collections::HashMap<usize, Vec<usize>>,
}

impl KnnIndex {
    /// Neighbor lists for `nodes` (others are not indexed). A node is never
    /// its own neighbor; ties go to the lower id.
    pub fn build(emb: &Matrix, k: usize, nodes: &[usize]) -> Result<Self> {
        let n = emb.rows();
        if k == 0 || k >= n {
            return Err(Error::InvalidConfig(format!(
                "k must be in [1, {}), got {k}",
                n
            )));
        }
        let unit = emb.row_normalized();
        let mut uniq: Vec<usize> = nodes.to_vec();
        uniq.sort_unstable();
        uniq.dedup();
        let lists = uniq
            .par_iter()
            .map(|&u| {
                let q = unit.row(u);
                let mut sims: Vec<(f64, usize)> = (0..n)
                    .filter(|&v| v != u)
                    .map(|v| (dot(q, unit.row(v)), v))
                    .collect();
                let by =
                    |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
                sims.select_nth_unstable_by(k - 1, by);
                sims.truncate(k);
                let mut ids: Vec<usize> = sims.into_iter().map(|(_, v)| v).collect();
                ids.sort_unstable();
                (u, ids)
            })
            .collect();
        Ok(KnnIndex { k, lists })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn neighbors(&self, u: usize) -> Option<&[usize]> {
        self.lists.get(&u).map(Vec::as_slice)
    }

    /// Jaccard similarity of the two neighbor sets with `u` and `v`
    /// themselves removed; 0 when both sets are empty.
    pub fn jaccard(&self, u: usize, v: usize) -> f64 {
        let (Some(a), Some(b)) = (self.neighbors(u), self.neighbors(v)) else {
            return 0.0;
        };
        let keep = |x: &&usize| **x != u && **x != v;
        let a: HashSet<usize> = a.iter().filter(keep).copied().collect();
        let b: HashSet<usize> = b.iter().filter(keep).copied().collect();
        let union = a.union(&b).count();
        if union == 0 {
            0.0
        } else {
            a.intersection(&b).count() as f64 / union as f64
        }
    }
}

pub fn jaccard_knn_score(emb: &Matrix, u: usize, v: usize, k: usize) -> Result<f64> {
    Ok(KnnIndex::build(emb, k, &[u, v])?.jaccard(u, v))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkPredConfig {
    pub holdout: f64,
    pub operators: Vec<EdgeOperator>,
    /// Neighborhood size for the Jaccard score; `None` skips it.
    pub jaccard_k: Option<usize>,
    pub logreg: LogRegConfig,
    pub normalize: bool,
    pub rng_seed: u64,
}

impl Default for LinkPredConfig {
    fn default() -> Self {
        LinkPredConfig {
            holdout: 0.5,
            operators: EdgeOperator::ALL.to_vec(),
            jaccard_k: Some(50),
            logreg: LogRegConfig::default(),
            normalize: false,
            rng_seed: 1,
        }
    }
}

/// Splits `g`, embeds the residual graph with `embed`, and reports the test
/// AUC of one classifier per operator plus the Jaccard score.
pub fn linkpred_eval(
    g: &CsrGraph,
    embed: impl FnOnce(&CsrGraph) -> Result<Matrix>,
    cfg: &LinkPredConfig,
) -> Result<EvalReport> {
    let split = holdout_split(g, cfg.holdout, cfg.rng_seed)?;
    let emb = embed(&split.residual)?;
    if emb.rows() != g.num_nodes() {
        return Err(Error::DimensionMismatch(emb.rows(), g.num_nodes()));
    }
    let emb = if cfg.normalize {
        emb.row_normalized()
    } else {
        emb
    };
    let mut report = score_split(&split, &emb, cfg)?;
    report.set("holdout", cfg.holdout);
    report.set("residual_edges", split.residual.num_edges());
    report.set("removed_edges", split.removed.len());
    report.set("l2", cfg.logreg.l2);
    report.set("normalize", cfg.normalize);
    report.set("seed", cfg.rng_seed);
    if let Some(k) = cfg.jaccard_k {
        report.set("jaccard_k", k);
    }
    report.notes.push(
        "edge removal only avoids isolating endpoints; the residual graph may be disconnected"
            .into(),
    );
    Ok(report)
}

/// AUCs for an existing split and embedding.
pub fn score_split(split: &HoldoutSplit, emb: &Matrix, cfg: &LinkPredConfig) -> Result<EvalReport> {
    let train_pos: Vec<(usize, usize)> = split.residual.edges().collect();
    let train_pairs: Vec<(usize, usize)> = train_pos
        .iter()
        .chain(&split.train_negatives)
        .copied()
        .collect();
    let train_y: Vec<bool> = (0..train_pairs.len())
        .map(|i| i < train_pos.len())
        .collect();
    let test_pairs: Vec<(usize, usize)> = split
        .removed
        .iter()
        .chain(&split.test_negatives)
        .copied()
        .collect();
    let test_y: Vec<bool> = (0..test_pairs.len())
        .map(|i| i < split.removed.len())
        .collect();

    let aucs: Vec<Result<(String, f64)>> = cfg
        .operators
        .par_iter()
        .map(|&op| {
            let model = logreg_fit(&pair_features(emb, &train_pairs, op), &train_y, &cfg.logreg)?;
            let xt = pair_features(emb, &test_pairs, op);
            let scores: Vec<f64> = (0..xt.rows()).map(|i| model.decision(xt.row(i))).collect();
            Ok((op.name().to_string(), auc(&scores, &test_y)?))
        })
        .collect();
    let mut report = EvalReport::new("linkpred");
    for a in aucs {
        report.auc.push(a?);
    }
    if let Some(k) = cfg.jaccard_k {
        let nodes: Vec<usize> = test_pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        let index = KnnIndex::build(emb, k, &nodes)?;
        let scores: Vec<f64> = test_pairs
            .iter()
            .map(|&(u, v)| index.jaccard(u, v))
            .collect();
        report.auc.push(("jaccard".into(), auc(&scores, &test_y)?));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn operators() {
        assert_eq!(
            edge_embed(&[1.0, 2.0], &[3.0, 4.0], EdgeOperator::Hadamard).unwrap(),
            vec![3.0, 8.0]
        );
        assert_eq!(
            edge_embed(&[1.0, 2.0], &[3.0, 0.0], EdgeOperator::L1).unwrap(),
            vec![2.0, 2.0]
        );
        assert_eq!(
            edge_embed(&[1.0, 2.0], &[3.0, 0.0], EdgeOperator::L2).unwrap(),
            vec![4.0, 4.0]
        );
        let x = [0.5, -1.5, 2.0];
        assert_eq!(
            edge_embed(&x, &x, EdgeOperator::Average).unwrap(),
            x.to_vec()
        );
        assert_eq!(edge_embed(&x, &x, EdgeOperator::L1).unwrap(), vec![0.0; 3]);
        assert!(edge_embed(&[1.0], &[1.0, 2.0], EdgeOperator::L2).is_err());
        assert_eq!(
            EdgeOperator::parse("hadamard").unwrap(),
            EdgeOperator::Hadamard
        );
        assert!(EdgeOperator::parse("cosine").is_err());
    }

    #[test]
    fn removal_keeps_endpoints() {
        let (g, _) = generators::karate_club();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (res, removed) = remove_edges(&g, 0.5, &mut rng).unwrap();
        assert_eq!(res.num_edges(), 39);
        assert_eq!(removed.len(), 39);
        assert!((0..34).all(|u| res.degree(u) >= 1));
        for &(u, v) in &removed {
            assert!(g.has_edge(u, v) && !res.has_edge(u, v));
        }
        assert_eq!(residual_edge_count(10, 0.7), 3);
        assert_eq!(residual_edge_count(7, 0.5), 4);
    }

    #[test]
    fn removal_infeasible_on_matching() {
        let g = CsrGraph::from_edges_unchecked(4, &[(0, 1), (2, 3)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            remove_edges(&g, 0.5, &mut rng),
            Err(Error::HoldoutInfeasible(_))
        ));
    }

    #[test]
    fn negatives_are_non_edges_and_disjoint() {
        let (g, _) = generators::karate_club();
        let s = holdout_split(&g, 0.5, 4).unwrap();
        let train: HashSet<_> = s.train_negatives.iter().copied().collect();
        assert_eq!(train.len(), s.train_negatives.len());
        for &(u, v) in s.train_negatives.iter().chain(&s.test_negatives) {
            assert!(u < v && !g.has_edge(u, v));
        }
        assert!(s.test_negatives.iter().all(|p| !train.contains(p)));
    }

    #[test]
    fn jaccard_examples() {
        // two tight clusters of 6 points each
        let mut rows = Vec::new();
        for c in 0..2 {
            for i in 0..6 {
                let base = if c == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
                rows.push(vec![base[0] + 0.01 * i as f64, base[1] + 0.013 * i as f64]);
            }
        }
        rows[3] = rows[2].clone();
        let m = Matrix::from_rows(&rows);
        assert_eq!(jaccard_knn_score(&m, 2, 3, 4).unwrap(), 1.0);
        assert_eq!(jaccard_knn_score(&m, 1, 8, 4).unwrap(), 0.0);
    }

    #[test]
    fn oracle_and_random_auc() {
        let labels: Vec<bool> = (0..10_000).map(|i| i % 2 == 0).collect();
        let oracle: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
        assert_eq!(auc(&oracle, &labels).unwrap(), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let noise: Vec<f64> = (0..10_000).map(|_| rng.gen()).collect();
        assert!((auc(&noise, &labels).unwrap() - 0.5).abs() < 0.02);
    }

    #[test]
    fn planted_structure_is_predictable() {
        // embedding = block indicator: within-block pairs should rank high
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, labels) = generators::planted_partition(120, 4, 0.3, 0.01, 0.0, &mut rng);
        let embed = |_: &CsrGraph| {
            let rows: Vec<Vec<f64>> = (0..g.num_nodes())
                .map(|u| {
                    (0..4)
                        .map(|c| if labels.has_label(u, c) { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect();
            Ok(Matrix::from_rows(&rows))
        };
        let cfg = LinkPredConfig {
            jaccard_k: Some(10),
            ..LinkPredConfig::default()
        };
        let r = linkpred_eval(&g, embed, &cfg).unwrap();
        assert!(r.is_consistent());
        assert!(r.auc_of("hadamard").unwrap() > 0.85, "{:?}", r.auc);
        assert!(r.auc_of("jaccard").unwrap() > 0.85, "{:?}", r.auc);
    }
}
