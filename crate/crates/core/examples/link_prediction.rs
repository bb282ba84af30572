//! Hides half the edges, embeds the rest and scores held-out edges against
//! sampled non-edges with every edge operator plus neighborhood Jaccard.
//!
//!     cargo run --release --example link_prediction

use lasagne::appr::compute_all_appr;
use lasagne::eval::{linkpred_eval, LinkPredConfig};
use lasagne::generators::planted_partition;
use lasagne::sgns::{train_on_graph, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lasagne::Result<()> {
    let (g, _) = planted_partition(500, 10, 0.25, 0.002, 0.0, &mut ChaCha8Rng::seed_from_u64(5));
    let cfg = TrainConfig {
        dim: 32,
        ..TrainConfig::default()
    };
    let embed = |residual: &lasagne::CsrGraph| {
        let apprs = compute_all_appr(residual, &cfg.appr)?;
        Ok(train_on_graph(residual, &apprs.vectors, &cfg)?
            .embeddings
            .input)
    };
    let lp = LinkPredConfig {
        jaccard_k: Some(20),
        ..LinkPredConfig::default()
    };
    let report = linkpred_eval(&g, embed, &lp)?;
    print!("{}", report.to_table());
    Ok(())
}
