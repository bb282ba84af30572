//! Training pairs per node: uniform random walks hand high-degree nodes far
//! more pairs than low-degree ones, APPR sampling gives every node the same
//! count.
//!
//!     cargo run --release --example walk_vs_appr_budget

use lasagne::appr::ApprConfig;
use lasagne::diagnostics::{instances_per_degree, pow2_buckets, ContextSource};
use lasagne::generators::preferential_attachment;
use lasagne::sgns::training_budget_per_node;
use lasagne::walks::{expected_pairs_per_node, WalkConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lasagne::Result<()> {
    let walk = WalkConfig::default();
    let budget = training_budget_per_node(walk.walk_len, walk.walks_per_node, walk.window);
    println!(
        "budget formula {budget} pairs/node; exact walk expectation {:.0}",
        expected_pairs_per_node(walk.walk_len, walk.walks_per_node, walk.window)
    );

    let g = preferential_attachment(3_000, 3, &mut ChaCha8Rng::seed_from_u64(3));
    let buckets = pow2_buckets(g.degrees().into_iter().max().unwrap_or(1));
    let sources = [
        ContextSource::Walks(walk),
        ContextSource::Appr(ApprConfig::default()),
    ];
    for source in &sources {
        let p = instances_per_degree(&g, source, &buckets, budget as usize, 1)?;
        println!(
            "\n{} (spearman with degree {:.3})",
            source.name(),
            p.degree_correlation
        );
        println!(
            "{:>10} {:>6} {:>10} {:>8}",
            "degree", "nodes", "mean", "std"
        );
        for r in &p.rows {
            println!(
                "{:>10} {:>6} {:>10.0} {:>8.0}",
                r.bucket.label(),
                r.nodes,
                r.mean,
                r.std
            );
        }
    }
    Ok(())
}
