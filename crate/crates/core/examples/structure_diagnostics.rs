//! Structural diagnostics as long-format CSV on stdout: hop distance of
//! sampled contexts per degree bucket for both context sources, and class
//! shares inside each k-core.
//!
//!     cargo run --release --example structure_diagnostics > diag.csv

use std::io::stdout;

use lasagne::appr::ApprConfig;
use lasagne::diagnostics::{
    hop_distance_profile, kcore_class_profile, kcore_csv_rows, pow2_buckets, write_csv,
    ContextSource, HopProfileConfig,
};
use lasagne::generators::{planted_partition, preferential_attachment};
use lasagne::walks::WalkConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lasagne::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = preferential_attachment(4_000, 3, &mut rng);
    let buckets = pow2_buckets(g.degrees().into_iter().max().unwrap_or(1));
    let out = stdout();
    for source in [
        ContextSource::Appr(ApprConfig::default()),
        ContextSource::Walks(WalkConfig::default()),
    ] {
        let p = hop_distance_profile(&g, &source, &buckets, &HopProfileConfig::default())?;
        for r in &p.rows {
            eprintln!(
                "{:<7} {:>10}  median hop {}  p95 {}",
                source.name(),
                r.bucket.label(),
                r.p50,
                r.p95
            );
        }
        write_csv(out.lock(), &p.config, &p.csv_rows(false))
            .map_err(|e| lasagne::Error::io("stdout", e))?;
    }

    let (pp, labels) = planted_partition(400, 4, 0.08, 0.01, 0.0, &mut rng);
    let rows = kcore_class_profile(&pp, &labels)?;
    write_csv(
        out.lock(),
        "kcore_class_profile",
        &kcore_csv_rows(&rows, &labels),
    )
    .map_err(|e| lasagne::Error::io("stdout", e))?;
    Ok(())
}
