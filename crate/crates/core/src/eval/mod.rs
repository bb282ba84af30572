//! Downstream evaluation of embeddings: multi-label node classification and
//! link prediction.

pub mod linkpred;
pub mod logreg;
pub mod metrics;
pub mod multilabel;
mod report;

pub use linkpred::{
    edge_embed, holdout_split, jaccard_knn_score, linkpred_eval, EdgeOperator, HoldoutSplit,
    KnnIndex, LinkPredConfig,
};
pub use logreg::{logreg_fit, LogRegConfig, LogRegModel};
pub use metrics::{auc, f1, metrics_f1, spearman, ClassCounts, F1Scores};
pub use multilabel::{multilabel_former, multilabel_realistic, FormerConfig, RealisticConfig};
pub use report::EvalReport;
