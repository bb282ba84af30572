use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::CsrGraph;

pub const EXACT_PPR_MAX_NODES: usize = 5_000;

/// Dense solve of `pr = β·e_seed + (1−β)·pr·D⁻¹A`.
pub fn exact_ppr(g: &CsrGraph, seed: usize, beta: f64) -> Result<Vec<f64>> {
    g.check_node(seed)?;
    if g.degree(seed) == 0 {
        return Err(Error::IsolatedNode(seed));
    }
    let mut start = vec![0.0; g.num_nodes()];
    start[seed] = 1.0;
    let pr = exact_ppr_from(g, &start, beta)?;
    let total: f64 = pr.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Numerical(format!("exact PPR mass {total} != 1")));
    }
    Ok(pr)
}

/// PPR of an arbitrary (not necessarily normalized) start row vector.
/// Linear in `start`.
pub fn exact_ppr_from(g: &CsrGraph, start: &[f64], beta: f64) -> Result<Vec<f64>> {
    let n = g.num_nodes();
    if n > EXACT_PPR_MAX_NODES {
        return Err(Error::SizeLimit {
            what: "nodes for dense PPR",
            actual: n,
            limit: EXACT_PPR_MAX_NODES,
        });
    }
    if start.len() != n {
        return Err(Error::DimensionMismatch(start.len(), n));
    }
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "teleportation must be in (0,1], got {beta}"
        )));
    }
    // transpose the row-vector system: (I − (1−β)Wᵀ) prᵀ = β·startᵀ
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        let d = g.degree(u);
        if d == 0 {
            continue;
        }
        let w = (1.0 - beta) / d as f64;
        for &v in g.neighbors(u) {
            m[(v, u)] -= w;
        }
    }
    let rhs = DVector::from_iterator(n, start.iter().map(|&s| beta * s));
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("PPR system with beta={beta}")))?;
    Ok(x.iter().copied().collect())
}
