//! Drawing training contexts from an APPR vector in constant time.
//!
//!     cargo run --example alias_sampling

use lasagne::alias::AliasTable;
use lasagne::appr::{compute_appr, ApprConfig};
use lasagne::generators::karate_club;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lasagne::Result<()> {
    let (g, _) = karate_club();
    let v = compute_appr(&g, 0, &ApprConfig::default())?;
    let table = AliasTable::from_appr(&v)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws = 200_000;
    let mut counts = vec![0usize; g.num_nodes()];
    for u in table.sample(draws, &mut rng) {
        counts[u] += 1;
    }
    let total = v.total_mass();
    println!("node  target  observed");
    for &(u, m) in v.entries.iter().take(12) {
        println!(
            "{u:>4}  {:.4}  {:.4}",
            m / total,
            counts[u] as f64 / draws as f64
        );
    }
    let outside = (0..g.num_nodes())
        .filter(|&u| v.mass(u) == 0.0)
        .map(|u| counts[u])
        .sum::<usize>();
    println!("draws outside the support: {outside}");
    Ok(())
}
