//! Command-line front end: `appr`, `train`, `embed`, `eval-multilabel`,
//! `eval-linkpred` and `diag`.
//!
//! Parameters come from flags, then from `--config` (a TOML file, or the
//! JSON manifest of an earlier run), then from built-in defaults. Every run
//! writes `<output>.manifest.json` with the merged parameters and the
//! SHA-256 of every input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::appr::{
    compute_all_appr, read_sidecar, write_sidecar, ApprConfig, ApprSidecar, ApprVector,
};
use crate::diagnostics::{
    delta_csv_rows, hop_distance_profile, instances_per_degree, kcore_class_profile,
    kcore_csv_rows, per_class_f1_delta, pow2_buckets, write_csv, ContextSource, HopProfileConfig,
};
use crate::error::{Error, Result};
use crate::eval::{
    linkpred_eval, multilabel_former, multilabel_realistic, EdgeOperator, EvalReport, FormerConfig,
    LinkPredConfig, LogRegConfig, RealisticConfig,
};
use crate::graph::{load_edge_list, load_labels, load_labels_for_ids, CsrGraph};
use crate::sgns::{
    read_embeddings, train, training_budget_per_node, write_embeddings_binary,
    write_embeddings_text, NoiseDistribution, TrainConfig,
};
use crate::walks::{simulate_walks, write_walks, WalkConfig};

#[derive(Debug, Parser)]
#[command(
    name = "lasagne",
    version,
    about = "Locality-aware node embeddings from APPR neighborhoods"
)]
pub struct Cli {
    /// TOML config file, or a manifest from an earlier run. Flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads; 1 makes training deterministic.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// -v info, -vv debug.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute APPR vectors for every node and write a sidecar file.
    Appr {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        appr: ApprArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train embeddings from an APPR sidecar.
    Train {
        #[arg(long)]
        appr: PathBuf,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        output: EmbeddingOut,
    },
    /// `appr` followed by `train`, without the intermediate file.
    Embed {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        appr: ApprArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[command(flatten)]
        output: EmbeddingOut,
    },
    /// Multi-label node classification.
    EvalMultilabel {
        #[arg(long)]
        embeddings: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// `former` or `realistic`.
        #[arg(long)]
        protocol: Option<String>,
        #[arg(long)]
        train_frac: Option<f64>,
        #[arg(long)]
        repetitions: Option<usize>,
        #[arg(long)]
        folds: Option<usize>,
        #[command(flatten)]
        classifier: ClassifierArgs,
        /// Report prefix; writes .txt, .tsv and .json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Link prediction on a held-out share of the edges.
    EvalLinkpred {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        appr: ApprArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long)]
        holdout: Option<f64>,
        /// Comma-separated subset of average,hadamard,l1,l2.
        #[arg(long)]
        ops: Option<String>,
        /// Neighborhood size for Jaccard scoring; 0 disables it.
        #[arg(long)]
        jaccard_k: Option<usize>,
        #[command(flatten)]
        classifier: ClassifierArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Structural diagnostics as CSV.
    Diag {
        #[command(subcommand)]
        kind: DiagKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum DiagKind {
    /// Hop distance from seeds to their sampled contexts, per degree bucket.
    Hops {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        samples_per_bucket: Option<usize>,
        #[arg(long)]
        contexts_per_seed: Option<usize>,
        /// Also dump every sampled hop distance.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Training pairs per node, per degree bucket.
    Instances {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        source: SourceArgs,
        /// Pairs per node for the APPR source.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Class label shares inside each k-core relative to the whole graph.
    Kcore {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-class F1 difference of two reports (JSON) against class size.
    F1Delta {
        #[arg(long)]
        report_a: PathBuf,
        #[arg(long)]
        report_b: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        /// Graph or embedding file providing the node ids of `--labels`.
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dump uniform random walks, one per line.
    Walks {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Whitespace-separated edge list.
    #[arg(long)]
    pub edges: PathBuf,
    /// Input lists each undirected edge in both directions.
    #[arg(long)]
    pub directed: bool,
    /// Keep only the largest connected component.
    #[arg(long)]
    pub lcc: bool,
}

#[derive(Debug, Args)]
pub struct ApprArgs {
    /// Teleportation parameter; a comma-separated list runs a sweep.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Significance threshold.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long)]
    pub walk_len: Option<usize>,
    #[arg(long)]
    pub walks_per_node: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub negatives: Option<usize>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub max_batches: Option<usize>,
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub lr_initial: Option<f64>,
    #[arg(long)]
    pub lr_final: Option<f64>,
    #[arg(long, conflicts_with = "uniform_noise")]
    pub noise_exponent: Option<f64>,
    #[arg(long)]
    pub uniform_noise: bool,
    /// Stop when the 50-batch moving loss changes by less than this.
    #[arg(long)]
    pub plateau_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EmbeddingOut {
    #[arg(long)]
    pub out: PathBuf,
    /// Write the binary layout instead of text.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct ClassifierArgs {
    #[arg(long)]
    pub l2: Option<f64>,
    /// Scale embeddings to unit length before classification.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// `appr` or `walks`.
    #[arg(long)]
    pub source: Option<String>,
    #[command(flatten)]
    pub appr: ApprArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
}

/// Values a config file may set. Unknown keys are rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<AlphaValue>,
    pub delta: Option<f64>,
    pub dim: Option<usize>,
    pub negatives: Option<usize>,
    pub batch_size: Option<usize>,
    pub max_batches: Option<usize>,
    pub walk_len: Option<usize>,
    pub walks_per_node: Option<usize>,
    pub window: Option<usize>,
    pub lr_initial: Option<f64>,
    pub lr_final: Option<f64>,
    pub noise_exponent: Option<f64>,
    pub uniform_noise: Option<bool>,
    pub plateau_tol: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub protocol: Option<String>,
    pub train_frac: Option<f64>,
    pub repetitions: Option<usize>,
    pub folds: Option<usize>,
    pub l2: Option<f64>,
    pub normalize: Option<bool>,
    pub holdout: Option<f64>,
    pub ops: Option<String>,
    pub jaccard_k: Option<usize>,
    pub directed: Option<bool>,
    pub lcc: Option<bool>,
    pub source: Option<String>,
    pub samples_per_bucket: Option<usize>,
    pub contexts_per_seed: Option<usize>,
    pub budget: Option<usize>,
    pub binary: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AlphaValue {
    One(f64),
    Many(String),
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if path.extension().is_some_and(|e| e == "json") {
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
            let params = v.get("parameters").cloned().unwrap_or(v);
            serde_json::from_value(params)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
        } else {
            toml::from_str(&text)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
        }
    }
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn parse_alphas(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad alpha {t:?}")))
        })
        .collect()
}

/// Run parameters after merging flags, config file and defaults.
struct Run {
    file: FileConfig,
    threads: usize,
    seed: u64,
    params: BTreeMap<String, Value>,
    inputs: Vec<PathBuf>,
}

impl Run {
    fn record(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.to_string(), v.into());
    }

    fn input(&mut self, p: &Path) {
        self.inputs.push(p.to_path_buf());
    }

    fn graph(&mut self, a: &GraphArgs) -> Result<CsrGraph> {
        let directed = a.directed || self.file.directed.unwrap_or(false);
        let lcc = a.lcc || self.file.lcc.unwrap_or(false);
        self.record("directed", directed);
        self.record("lcc", lcc);
        self.input(&a.edges);
        let (g, _) = load_edge_list(&a.edges, directed)?;
        if lcc {
            let (sub, _) = g.largest_component();
            log::info!(
                "largest component keeps {} of {} nodes",
                sub.num_nodes(),
                g.num_nodes()
            );
            return Ok(sub);
        }
        Ok(g)
    }

    fn alphas(&mut self, a: &ApprArgs) -> Result<Vec<f64>> {
        let alphas = match (&a.alpha, &self.file.alpha) {
            (Some(s), _) => parse_alphas(s)?,
            (None, Some(AlphaValue::One(x))) => vec![*x],
            (None, Some(AlphaValue::Many(s))) => parse_alphas(s)?,
            (None, None) => vec![ApprConfig::default().alpha],
        };
        let joined: Vec<String> = alphas.iter().map(|a| a.to_string()).collect();
        self.record("alpha", joined.join(","));
        Ok(alphas)
    }

    fn appr_config(&mut self, a: &ApprArgs, alpha: f64) -> Result<ApprConfig> {
        let delta = pick(a.delta, self.file.delta, ApprConfig::default().delta);
        self.record("delta", delta);
        ApprConfig::new(alpha, delta)
    }

    fn walk_config(&mut self, a: &WalkArgs) -> WalkConfig {
        let d = WalkConfig::default();
        let cfg = WalkConfig {
            walk_len: pick(a.walk_len, self.file.walk_len, d.walk_len),
            walks_per_node: pick(a.walks_per_node, self.file.walks_per_node, d.walks_per_node),
            window: pick(a.window, self.file.window, d.window),
            rng_seed: self.seed,
        };
        self.record("walk_len", cfg.walk_len);
        self.record("walks_per_node", cfg.walks_per_node);
        self.record("window", cfg.window);
        cfg
    }

    fn train_config(&mut self, a: &TrainArgs, appr: ApprConfig) -> Result<TrainConfig> {
        let d = TrainConfig::default();
        let walk = self.walk_config(&a.walk);
        let f = self.file.clone();
        let uniform = a.uniform_noise || f.uniform_noise.unwrap_or(false);
        let exponent = pick(a.noise_exponent, f.noise_exponent, 0.75);
        if uniform && f.noise_exponent.is_some() && a.noise_exponent.is_none() {
            log::warn!("uniform noise set; ignoring noise_exponent from the config file");
        }
        let cfg = TrainConfig {
            dim: pick(a.dim, f.dim, d.dim),
            appr,
            negatives: pick(a.negatives, f.negatives, d.negatives),
            batch_size: a.batch_size.or(f.batch_size),
            max_batches: a.max_batches.or(f.max_batches),
            walk_len: walk.walk_len,
            walks_per_node: walk.walks_per_node,
            window: walk.window,
            lr_initial: pick(a.lr_initial, f.lr_initial, d.lr_initial),
            lr_final: pick(a.lr_final, f.lr_final, d.lr_final),
            noise: if uniform {
                NoiseDistribution::Uniform
            } else {
                NoiseDistribution::DegreePower(exponent)
            },
            rng_seed: self.seed,
            threads: self.threads,
            plateau_tolerance: a.plateau_tol.or(f.plateau_tol),
        };
        cfg.validate()?;
        self.record("dim", cfg.dim);
        self.record("negatives", cfg.negatives);
        self.record("batch_size", cfg.batch_size);
        self.record("max_batches", cfg.max_batches);
        self.record("lr_initial", cfg.lr_initial);
        self.record("lr_final", cfg.lr_final);
        self.record("uniform_noise", uniform);
        if !uniform {
            self.record("noise_exponent", exponent);
        }
        self.record("plateau_tol", cfg.plateau_tolerance);
        Ok(cfg)
    }

    fn classifier(&mut self, a: &ClassifierArgs) -> (LogRegConfig, bool) {
        let l2 = pick(a.l2, self.file.l2, LogRegConfig::default().l2);
        let normalize = a.normalize || self.file.normalize.unwrap_or(false);
        self.record("l2", l2);
        self.record("normalize", normalize);
        (
            LogRegConfig {
                l2,
                ..LogRegConfig::default()
            },
            normalize,
        )
    }

    fn source(&mut self, a: &SourceArgs) -> Result<ContextSource> {
        let name = pick(
            a.source.clone(),
            self.file.source.clone(),
            "appr".to_string(),
        );
        self.record("source", name.as_str());
        match name.as_str() {
            "appr" => {
                let alphas = self.alphas(&a.appr)?;
                if alphas.len() != 1 {
                    return Err(Error::InvalidConfig(
                        "diagnostics take a single alpha".into(),
                    ));
                }
                Ok(ContextSource::Appr(self.appr_config(&a.appr, alphas[0])?))
            }
            "walks" => Ok(ContextSource::Walks(self.walk_config(&a.walk))),
            other => Err(Error::InvalidConfig(format!(
                "unknown source {other:?}, expected appr or walks"
            ))),
        }
    }

    /// Writes `<primary>.manifest.json`.
    fn manifest(&self, command: &str, primary: &Path, outputs: &[PathBuf]) -> Result<()> {
        let mut inputs = Vec::new();
        for p in &self.inputs {
            let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
            inputs.push(json!({
                "path": p.display().to_string(),
                "sha256": hex::encode(Sha256::digest(&bytes)),
            }));
        }
        let mut params = self.params.clone();
        params.insert("seed".into(), self.seed.into());
        params.insert("threads".into(), self.threads.into());
        let doc = json!({
            "tool": "lasagne",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "parameters": params,
            "inputs": inputs,
            "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        let path = suffixed(primary, "manifest.json");
        let text = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
    }
}

/// `out` with `.ext` appended to the full file name.
fn suffixed(out: &Path, ext: &str) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// `emb.txt` → `emb.alpha0.2.txt` for sweeps; unchanged for a single alpha.
pub fn alpha_path(out: &Path, alpha: f64, sweep: bool) -> PathBuf {
    if !sweep {
        return out.to_path_buf();
    }
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.alpha{alpha}.{}", ext.to_string_lossy()),
        None => format!("{stem}.alpha{alpha}"),
    };
    out.with_file_name(name)
}

fn create(path: &Path) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    File::create(path).map_err(|e| Error::io(path, e))
}

fn write_embeddings(
    binary: bool,
    path: &Path,
    ids: &[String],
    m: &crate::matrix::Matrix,
) -> Result<()> {
    let f = create(path)?;
    if binary {
        write_embeddings_binary(f, ids, m)
    } else {
        write_embeddings_text(f, ids, m)
    }
    .map_err(|e| Error::io(path, e))
}

fn write_report(prefix: &Path, report: &EvalReport) -> Result<Vec<PathBuf>> {
    let txt = suffixed(prefix, "txt");
    let tsv = suffixed(prefix, "tsv");
    let jsn = suffixed(prefix, "json");
    fs::write(&txt, report.to_table()).map_err(|e| Error::io(&txt, e))?;
    report
        .write_kv(BufWriter::new(create(&tsv)?))
        .map_err(|e| Error::io(&tsv, e))?;
    fs::write(&jsn, report.to_json()).map_err(|e| Error::io(&jsn, e))?;
    Ok(vec![txt, tsv, jsn])
}

fn train_and_write(
    degrees: &[usize],
    ids: &[String],
    vectors: &[ApprVector],
    cfg: &TrainConfig,
    binary: bool,
    path: &Path,
) -> Result<()> {
    let trained = train(degrees, vectors, cfg)?;
    log::info!(
        "trained {} batches of {} pairs",
        trained.report.batches_run,
        trained.report.batch_size
    );
    write_embeddings(binary, path, ids, &trained.embeddings.input)
}

fn execute(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = pick(cli.threads, file.threads, 1);
    if threads == 0 {
        return Err(Error::InvalidConfig("--threads must be >= 1".into()));
    }
    let seed = pick(cli.seed, file.seed, 1);
    let mut run = Run {
        file,
        threads,
        seed,
        params: BTreeMap::new(),
        inputs: Vec::new(),
    };
    if let Some(p) = &cli.config {
        run.input(p);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli.command, &mut run))
}

fn dispatch(command: Command, run: &mut Run) -> Result<()> {
    match command {
        Command::Appr { graph, appr, out } => {
            let g = run.graph(&graph)?;
            let alphas = run.alphas(&appr)?;
            let sweep = alphas.len() > 1;
            let mut outputs = Vec::new();
            for &alpha in &alphas {
                let cfg = run.appr_config(&appr, alpha)?;
                let batch = compute_all_appr(&g, &cfg)?;
                let path = alpha_path(&out, alpha, sweep);
                write_sidecar(&path, &ApprSidecar::new(&g, &cfg, batch.vectors))?;
                outputs.push(path);
            }
            run.manifest("appr", &out, &outputs)
        }
        Command::Train {
            appr,
            train: targs,
            output,
        } => {
            run.input(&appr);
            let sc = read_sidecar(&appr)?;
            let acfg = ApprConfig::new(sc.alpha, sc.delta)?;
            run.record("alpha", sc.alpha.to_string());
            run.record("delta", sc.delta);
            let cfg = run.train_config(&targs, acfg)?;
            let binary = output.binary || run.file.binary.unwrap_or(false);
            run.record("binary", binary);
            train_and_write(
                &sc.degrees,
                &sc.external_ids,
                &sc.vectors,
                &cfg,
                binary,
                &output.out,
            )?;
            run.manifest("train", &output.out, std::slice::from_ref(&output.out))
        }
        Command::Embed {
            graph,
            appr,
            train: targs,
            output,
        } => {
            let g = run.graph(&graph)?;
            let alphas = run.alphas(&appr)?;
            let sweep = alphas.len() > 1;
            let binary = output.binary || run.file.binary.unwrap_or(false);
            run.record("binary", binary);
            let mut outputs = Vec::new();
            for &alpha in &alphas {
                let acfg = run.appr_config(&appr, alpha)?;
                let cfg = run.train_config(&targs, acfg)?;
                let batch = compute_all_appr(&g, &acfg)?;
                let path = alpha_path(&output.out, alpha, sweep);
                train_and_write(
                    &g.degrees(),
                    g.external_ids(),
                    &batch.vectors,
                    &cfg,
                    binary,
                    &path,
                )?;
                outputs.push(path);
            }
            run.manifest("embed", &output.out, &outputs)
        }
        Command::EvalMultilabel {
            embeddings,
            labels,
            protocol,
            train_frac,
            repetitions,
            folds,
            classifier,
            out,
        } => {
            run.input(&embeddings);
            run.input(&labels);
            let emb = read_embeddings(&embeddings)?;
            let ls = load_labels_for_ids(&labels, &emb.ids)?;
            let (logreg, normalize) = run.classifier(&classifier);
            let protocol = pick(protocol, run.file.protocol.clone(), "former".to_string());
            run.record("protocol", protocol.as_str());
            let report = match protocol.as_str() {
                "former" => {
                    let f = FormerConfig::default();
                    let cfg = FormerConfig {
                        train_fraction: pick(train_frac, run.file.train_frac, f.train_fraction),
                        repetitions: pick(repetitions, run.file.repetitions, f.repetitions),
                        logreg,
                        normalize,
                        rng_seed: run.seed,
                    };
                    run.record("train_frac", cfg.train_fraction);
                    run.record("repetitions", cfg.repetitions);
                    multilabel_former(&emb.matrix, &ls, &cfg)?
                }
                "realistic" => {
                    let r = RealisticConfig::default();
                    let cfg = RealisticConfig {
                        folds: pick(folds, run.file.folds, r.folds),
                        logreg,
                        normalize,
                        rng_seed: run.seed,
                        ..r
                    };
                    run.record("folds", cfg.folds);
                    multilabel_realistic(&emb.matrix, &ls, &cfg)?
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown protocol {other:?}, expected former or realistic"
                    )))
                }
            };
            let outputs = write_report(&out, &report)?;
            println!("{}", report.to_table());
            run.manifest("eval-multilabel", &out, &outputs)
        }
        Command::EvalLinkpred {
            graph,
            appr,
            train: targs,
            holdout,
            ops,
            jaccard_k,
            classifier,
            out,
        } => {
            let g = run.graph(&graph)?;
            let alphas = run.alphas(&appr)?;
            let sweep = alphas.len() > 1;
            let (logreg, normalize) = run.classifier(&classifier);
            let ops_s = pick(
                ops,
                run.file.ops.clone(),
                "average,hadamard,l1,l2".to_string(),
            );
            let operators = ops_s
                .split(',')
                .map(|s| EdgeOperator::parse(s.trim()))
                .collect::<Result<Vec<_>>>()?;
            let jk = pick(jaccard_k, run.file.jaccard_k, 50);
            let cfg = LinkPredConfig {
                holdout: pick(holdout, run.file.holdout, 0.5),
                operators,
                jaccard_k: (jk > 0).then_some(jk),
                logreg,
                normalize,
                rng_seed: run.seed,
            };
            run.record("holdout", cfg.holdout);
            run.record("ops", ops_s.as_str());
            run.record("jaccard_k", jk);
            let mut outputs = Vec::new();
            for &alpha in &alphas {
                let acfg = run.appr_config(&appr, alpha)?;
                let tcfg = run.train_config(&targs, acfg)?;
                let embed = |residual: &CsrGraph| {
                    let batch = compute_all_appr(residual, &acfg)?;
                    Ok(train(&residual.degrees(), &batch.vectors, &tcfg)?
                        .embeddings
                        .input)
                };
                let mut report = linkpred_eval(&g, embed, &cfg)?;
                report.set("alpha", alpha);
                let prefix = alpha_path(&out, alpha, sweep);
                outputs.extend(write_report(&prefix, &report)?);
                println!("{}", report.to_table());
            }
            run.manifest("eval-linkpred", &out, &outputs)
        }
        Command::Diag { kind } => diag(kind, run),
    }
}

fn diag(kind: DiagKind, run: &mut Run) -> Result<()> {
    let csv = |path: &Path, config: &str, rows: &[(String, &str, String)]| -> Result<()> {
        write_csv(BufWriter::new(create(path)?), config, rows).map_err(|e| Error::io(path, e))
    };
    match kind {
        DiagKind::Hops {
            graph,
            source,
            samples_per_bucket,
            contexts_per_seed,
            raw,
            out,
        } => {
            let g = run.graph(&graph)?;
            let src = run.source(&source)?;
            let d = HopProfileConfig::default();
            let cfg = HopProfileConfig {
                samples_per_bucket: pick(
                    samples_per_bucket,
                    run.file.samples_per_bucket,
                    d.samples_per_bucket,
                ),
                contexts_per_seed: pick(
                    contexts_per_seed,
                    run.file.contexts_per_seed,
                    d.contexts_per_seed,
                ),
                rng_seed: run.seed,
            };
            run.record("samples_per_bucket", cfg.samples_per_bucket);
            run.record("contexts_per_seed", cfg.contexts_per_seed);
            let max_deg = g.degrees().into_iter().max().unwrap_or(0);
            let p = hop_distance_profile(&g, &src, &pow2_buckets(max_deg), &cfg)?;
            for n in &p.notes {
                log::warn!("{n}");
            }
            csv(&out, &p.config, &p.csv_rows(raw))?;
            run.manifest("diag hops", &out, std::slice::from_ref(&out))
        }
        DiagKind::Instances {
            graph,
            source,
            budget,
            out,
        } => {
            let g = run.graph(&graph)?;
            let src = run.source(&source)?;
            // default: what the walk setting would hand each node
            let walk = run.walk_config(&source.walk);
            let default_budget =
                training_budget_per_node(walk.walk_len, walk.walks_per_node, walk.window) as usize;
            let budget = pick(budget, run.file.budget, default_budget);
            run.record("budget", budget);
            let max_deg = g.degrees().into_iter().max().unwrap_or(0);
            let p = instances_per_degree(&g, &src, &pow2_buckets(max_deg), budget, run.seed)?;
            csv(&out, &p.config, &p.csv_rows())?;
            run.manifest("diag instances", &out, std::slice::from_ref(&out))
        }
        DiagKind::Kcore { graph, labels, out } => {
            let g = run.graph(&graph)?;
            run.input(&labels);
            let ls = load_labels(&labels, &g)?;
            let rows = kcore_class_profile(&g, &ls)?;
            csv(&out, "kcore_class_profile", &kcore_csv_rows(&rows, &ls))?;
            run.manifest("diag kcore", &out, std::slice::from_ref(&out))
        }
        DiagKind::F1Delta {
            report_a,
            report_b,
            labels,
            edges,
            embeddings,
            out,
        } => {
            let read = |p: &Path| -> Result<EvalReport> {
                EvalReport::from_json(&fs::read_to_string(p).map_err(|e| Error::io(p, e))?)
            };
            run.input(&report_a);
            run.input(&report_b);
            run.input(&labels);
            let (a, b) = (read(&report_a)?, read(&report_b)?);
            let ls = match (edges, embeddings) {
                (Some(e), None) => {
                    run.input(&e);
                    load_labels(&labels, &load_edge_list(&e, false)?.0)?
                }
                (None, Some(m)) => {
                    run.input(&m);
                    load_labels_for_ids(&labels, &read_embeddings(&m)?.ids)?
                }
                _ => {
                    return Err(Error::InvalidConfig(
                        "f1-delta needs exactly one of --edges or --embeddings".into(),
                    ))
                }
            };
            let rows = per_class_f1_delta(&a, &b, &ls)?;
            let config = format!(
                "per_class_f1_delta a={} b={}",
                report_a.display(),
                report_b.display()
            );
            csv(&out, &config, &delta_csv_rows(&rows))?;
            run.manifest("diag f1-delta", &out, std::slice::from_ref(&out))
        }
        DiagKind::Walks { graph, walk, out } => {
            let g = run.graph(&graph)?;
            let cfg = run.walk_config(&walk);
            let walks = simulate_walks(&g, &cfg)?;
            write_walks(BufWriter::new(create(&out)?), &walks, &g)
                .map_err(|e| Error::io(&out, e))?;
            run.manifest("diag walks", &out, std::slice::from_ref(&out))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 success, 1 usage error, 2 data error, 3 numerical failure.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
