//! Node classification on a planted-partition graph under both protocols:
//! top-k prediction with known label counts, and stratified cross-validation
//! with a 0.5 threshold.
//!
//!     cargo run --release --example multilabel_eval

use lasagne::appr::compute_all_appr;
use lasagne::eval::{multilabel_former, multilabel_realistic, FormerConfig, RealisticConfig};
use lasagne::generators::planted_partition;
use lasagne::sgns::{train_on_graph, TrainConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lasagne::Result<()> {
    let (g, labels) =
        planted_partition(600, 6, 0.06, 0.004, 0.3, &mut ChaCha8Rng::seed_from_u64(11));
    println!(
        "{} nodes, {} edges, {} classes",
        g.num_nodes(),
        g.num_edges(),
        labels.num_classes()
    );
    let cfg = TrainConfig {
        dim: 32,
        ..TrainConfig::default()
    };
    let apprs = compute_all_appr(&g, &cfg.appr)?;
    let emb = train_on_graph(&g, &apprs.vectors, &cfg)?.embeddings.input;

    let former = multilabel_former(&emb, &labels, &FormerConfig::default())?;
    print!("{}", former.to_table());
    let realistic = multilabel_realistic(&emb, &labels, &RealisticConfig::default())?;
    print!("\n{}", realistic.to_table());
    Ok(())
}
