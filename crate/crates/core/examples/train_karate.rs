//! Embeds the karate club and checks that the two factions separate.
//!
//!     cargo run --release --example train_karate [out.txt]

use std::fs::File;

use lasagne::appr::compute_all_appr;
use lasagne::generators::karate_club;
use lasagne::matrix::cosine;
use lasagne::sgns::{train_on_graph, write_embeddings_text, TrainConfig};

fn main() -> lasagne::Result<()> {
    let (g, faction) = karate_club();
    let cfg = TrainConfig {
        dim: 16,
        ..TrainConfig::default()
    };
    let apprs = compute_all_appr(&g, &cfg.appr)?;
    let trained = train_on_graph(&g, &apprs.vectors, &cfg)?;
    let r = &trained.report;
    println!(
        "{} batches of {} pairs ({} per seed), loss {:.3} -> {:.3}",
        r.batches_run,
        r.batch_size,
        r.pairs_per_seed(),
        r.batch_losses.first().unwrap_or(&f64::NAN),
        r.batch_losses.last().unwrap_or(&f64::NAN)
    );
    let emb = &trained.embeddings.input;
    let (mut same, mut cross) = (Vec::new(), Vec::new());
    for u in 0..34 {
        for v in u + 1..34 {
            let c = cosine(emb.row(u), emb.row(v));
            if faction[u] == faction[v] {
                same.push(c)
            } else {
                cross.push(c)
            }
        }
    }
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    println!(
        "mean cosine within factions {:.3}, across {:.3}",
        mean(&same),
        mean(&cross)
    );

    if let Some(path) = std::env::args().nth(1) {
        let f = File::create(&path).map_err(|e| lasagne::Error::io(&path, e))?;
        write_embeddings_text(f, g.external_ids(), emb)
            .map_err(|e| lasagne::Error::io(&path, e))?;
    }
    Ok(())
}
