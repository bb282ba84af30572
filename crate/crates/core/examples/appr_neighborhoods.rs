//! APPR neighborhoods of a few karate-club members at three teleportation
//! settings, next to the exact PPR of the same seed.
//!
//!     cargo run --example appr_neighborhoods

use lasagne::appr::{compute_appr, exact_ppr, ApprConfig};
use lasagne::generators::karate_club;

fn main() -> lasagne::Result<()> {
    let (g, _) = karate_club();
    for seed in [0, 11, 33] {
        println!("seed {seed} (degree {})", g.degree(seed));
        for alpha in [0.05, 0.2, 0.5] {
            let cfg = ApprConfig::new(alpha, 1e-4)?;
            let v = compute_appr(&g, seed, &cfg)?;
            let exact = exact_ppr(&g, seed, cfg.beta())?;
            let mut top = v.entries.clone();
            top.sort_by(|a, b| b.1.total_cmp(&a.1));
            let shown: Vec<String> = top
                .iter()
                .take(5)
                .map(|&(u, m)| format!("{u}:{m:.3}/{:.3}", exact[u]))
                .collect();
            println!(
                "  alpha {alpha:<4}  support {:>2}  pushes {:>4}  residual {:.1e}  top {}",
                v.len(),
                v.num_pushes,
                v.residual_l1,
                shown.join(" ")
            );
        }
    }
    println!("(entries are appr/exact; the seed entry is replaced by the largest other mass)");
    Ok(())
}
