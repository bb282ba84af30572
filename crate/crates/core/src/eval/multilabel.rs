//! One-vs-rest multi-label node classification under two protocols.
//!
//! `realistic`: per class, stratified k-fold cross-validation, a label is
//! predicted when its probability is at least the threshold.
//!
//! `former`: uniform train/test split repeated several times; every test
//! node is assigned its `k` highest-scoring classes, `k` being its true
//! number of labels.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::logreg::{logreg_fit, LogRegConfig};
use super::metrics::{f1, metrics_f1, ClassCounts};
use super::report::EvalReport;
use crate::error::{Error, Result};
use crate::graph::LabelSet;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct RealisticConfig {
    pub folds: usize,
    pub threshold: f64,
    pub logreg: LogRegConfig,
    pub normalize: bool,
    pub rng_seed: u64,
}

impl Default for RealisticConfig {
    fn default() -> Self {
        RealisticConfig {
            folds: 10,
            threshold: 0.5,
            logreg: LogRegConfig::default(),
            normalize: false,
            rng_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormerConfig {
    pub train_fraction: f64,
    pub repetitions: usize,
    pub logreg: LogRegConfig,
    pub normalize: bool,
    pub rng_seed: u64,
}

impl Default for FormerConfig {
    fn default() -> Self {
        FormerConfig {
            train_fraction: 0.9,
            repetitions: 10,
            logreg: LogRegConfig::default(),
            normalize: false,
            rng_seed: 1,
        }
    }
}

fn prepare(emb: &Matrix, labels: &LabelSet, normalize: bool) -> Result<(Vec<usize>, Matrix)> {
    if emb.rows() != labels.num_nodes() {
        return Err(Error::DimensionMismatch(emb.rows(), labels.num_nodes()));
    }
    let nodes = labels.labeled_nodes();
    let x = emb.select_rows(&nodes);
    Ok((nodes, if normalize { x.row_normalized() } else { x }))
}

fn stream(seed: u64, key: u64, id: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ key);
    rng.set_stream(id as u64);
    rng
}

/// Fold of each entry of `positive`: after a shuffle, positives are dealt
/// round-robin over the folds, then negatives continue the rotation.
pub fn stratified_folds(positive: &[bool], folds: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..positive.len()).collect();
    order.shuffle(rng);
    let mut fold = vec![0; positive.len()];
    let mut next = 0;
    for want in [true, false] {
        for &i in order.iter().filter(|&&i| positive[i] == want) {
            fold[i] = next % folds;
            next += 1;
        }
    }
    fold
}

pub fn multilabel_realistic(
    emb: &Matrix,
    labels: &LabelSet,
    cfg: &RealisticConfig,
) -> Result<EvalReport> {
    if cfg.folds < 2 {
        return Err(Error::InvalidConfig(format!(
            "folds must be >= 2, got {}",
            cfg.folds
        )));
    }
    let (nodes, x) = prepare(emb, labels, cfg.normalize)?;
    let k = labels.num_classes();
    let n = nodes.len();
    let usable: Vec<usize> = (0..k)
        .filter(|&c| {
            let pos = nodes.iter().filter(|&&u| labels.has_label(u, c)).count();
            pos >= cfg.folds && n - pos >= cfg.folds
        })
        .collect();
    if usable.is_empty() {
        return Err(Error::NoUsableClasses);
    }

    let per_class: Vec<Result<Vec<ClassCounts>>> = usable
        .par_iter()
        .map(|&c| {
            let y: Vec<bool> = nodes.iter().map(|&u| labels.has_label(u, c)).collect();
            let fold = stratified_folds(&y, cfg.folds, &mut stream(cfg.rng_seed, 0x5eed_f01d, c));
            let mut counts = vec![ClassCounts::default(); cfg.folds];
            for (f, cnt) in counts.iter_mut().enumerate() {
                let train: Vec<usize> = (0..n).filter(|&i| fold[i] != f).collect();
                let test: Vec<usize> = (0..n).filter(|&i| fold[i] == f).collect();
                let ytr: Vec<bool> = train.iter().map(|&i| y[i]).collect();
                let model = logreg_fit(&x.select_rows(&train), &ytr, &cfg.logreg)?;
                for &i in &test {
                    cnt.record(model.predict_proba(x.row(i)) >= cfg.threshold, y[i]);
                }
            }
            Ok(counts)
        })
        .collect();

    let mut report = EvalReport::new("realistic");
    report.class_names = (0..k).map(|c| labels.class_name(c).to_string()).collect();
    report.per_class_f1 = vec![None; k];
    let mut fold_counts = vec![vec![ClassCounts::default(); usable.len()]; cfg.folds];
    let mut pooled = Vec::with_capacity(usable.len());
    for (j, (&c, res)) in usable.iter().zip(per_class).enumerate() {
        let counts = res?;
        let mut total = ClassCounts::default();
        for (f, cnt) in counts.into_iter().enumerate() {
            fold_counts[f][j] = cnt;
            total.add(cnt);
        }
        report.per_class_f1[c] = Some(total.f1());
        pooled.push(total);
    }
    let overall = metrics_f1(&pooled);
    report.macro_f1 = overall.macro_f1;
    report.micro_f1 = overall.micro_f1;
    for fc in &fold_counts {
        let s = metrics_f1(fc);
        report.fold_macro_f1.push(s.macro_f1);
        report.fold_micro_f1.push(s.micro_f1);
    }
    report.set("folds", cfg.folds);
    report.set("threshold", cfg.threshold);
    report.set("l2", cfg.logreg.l2);
    report.set("normalize", cfg.normalize);
    report.set("seed", cfg.rng_seed);
    report.set("labeled_nodes", n);
    let skipped = k - usable.len();
    if skipped > 0 {
        let names: Vec<&str> = report
            .skipped_classes()
            .iter()
            .map(|&c| labels.class_name(c))
            .collect();
        report.notes.push(format!(
            "{skipped} classes with fewer than {} positives or negatives skipped: {}",
            cfg.folds,
            names.join(" ")
        ));
    }
    Ok(report)
}

pub fn multilabel_former(
    emb: &Matrix,
    labels: &LabelSet,
    cfg: &FormerConfig,
) -> Result<EvalReport> {
    if !(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train fraction must be in (0, 1), got {}",
            cfg.train_fraction
        )));
    }
    if cfg.repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
    }
    let (nodes, x) = prepare(emb, labels, cfg.normalize)?;
    let k = labels.num_classes();
    let n = nodes.len();
    if k == 0 || n < 2 {
        return Err(Error::NoUsableClasses);
    }
    let n_train = ((cfg.train_fraction * n as f64).round() as usize).clamp(1, n - 1);

    let mut report = EvalReport::new("former");
    report.class_names = (0..k).map(|c| labels.class_name(c).to_string()).collect();
    let mut pooled = vec![ClassCounts::default(); k];
    for rep in 0..cfg.repetitions {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut stream(cfg.rng_seed, 0xf0_4e37, rep));
        let (train, test) = order.split_at(n_train);
        let xtr = x.select_rows(train);

        // scores[c][j]: probability of class c for test node j
        let scores: Vec<Result<(Vec<f64>, Option<String>)>> = (0..k)
            .into_par_iter()
            .map(|c| {
                let ytr: Vec<bool> = train.iter().map(|&i| labels.has_label(nodes[i], c)).collect();
                let pos = ytr.iter().filter(|&&b| b).count();
                if pos == 0 || pos == ytr.len() {
                    let p = if pos == 0 { 0.0 } else { 1.0 };
                    let note = format!(
                        "repetition {rep}: class {} has {pos} of {} training positives, constant prediction {p}",
                        labels.class_name(c),
                        ytr.len()
                    );
                    return Ok((vec![p; test.len()], Some(note)));
                }
                let m = logreg_fit(&xtr, &ytr, &cfg.logreg)?;
                Ok((test.iter().map(|&i| m.predict_proba(x.row(i))).collect(), None))
            })
            .collect();
        let mut cols = Vec::with_capacity(k);
        for s in scores {
            let (col, note) = s?;
            report.notes.extend(note);
            cols.push(col);
        }

        let mut counts = vec![ClassCounts::default(); k];
        let mut ranked: Vec<usize> = (0..k).collect();
        for (j, &i) in test.iter().enumerate() {
            let truth = labels.labels(nodes[i]);
            ranked.sort_by(|&a, &b| cols[b][j].total_cmp(&cols[a][j]).then(a.cmp(&b)));
            let top = &ranked[..truth.len()];
            for (c, cc) in counts.iter_mut().enumerate() {
                cc.record(top.contains(&c), truth.binary_search(&c).is_ok());
            }
        }
        let s = metrics_f1(&counts);
        report.fold_macro_f1.push(s.macro_f1);
        report.fold_micro_f1.push(s.micro_f1);
        pooled.iter_mut().zip(&counts).for_each(|(p, c)| p.add(*c));
    }
    report.per_class_f1 = pooled.iter().map(|c| Some(f1(c.tp, c.fp, c.fn_))).collect();
    report.macro_f1 = mean(&report.fold_macro_f1);
    report.micro_f1 = mean(&report.fold_micro_f1);
    report.set("train_fraction", cfg.train_fraction);
    report.set("repetitions", cfg.repetitions);
    report.set("l2", cfg.logreg.l2);
    report.set("normalize", cfg.normalize);
    report.set("seed", cfg.rng_seed);
    report.set("labeled_nodes", n);
    Ok(report)
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len().max(1) as f64
}
