//! Small bundled and synthetic graphs for examples and tests.

use rand::Rng;

use crate::graph::{CsrGraph, LabelSet};

const KARATE_EDGES: [(usize, usize); 78] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (0, 5),
    (0, 6),
    (0, 7),
    (0, 8),
    (0, 10),
    (0, 11),
    (0, 12),
    (0, 13),
    (0, 17),
    (0, 19),
    (0, 21),
    (0, 31),
    (1, 2),
    (1, 3),
    (1, 7),
    (1, 13),
    (1, 17),
    (1, 19),
    (1, 21),
    (1, 30),
    (2, 3),
    (2, 7),
    (2, 8),
    (2, 9),
    (2, 13),
    (2, 27),
    (2, 28),
    (2, 32),
    (3, 7),
    (3, 12),
    (3, 13),
    (4, 6),
    (4, 10),
    (5, 6),
    (5, 10),
    (5, 16),
    (6, 16),
    (8, 30),
    (8, 32),
    (8, 33),
    (9, 33),
    (13, 33),
    (14, 32),
    (14, 33),
    (15, 32),
    (15, 33),
    (18, 32),
    (18, 33),
    (19, 33),
    (20, 32),
    (20, 33),
    (22, 32),
    (22, 33),
    (23, 25),
    (23, 27),
    (23, 29),
    (23, 32),
    (23, 33),
    (24, 25),
    (24, 27),
    (24, 31),
    (25, 31),
    (26, 29),
    (26, 33),
    (27, 33),
    (28, 31),
    (28, 33),
    (29, 32),
    (29, 33),
    (30, 32),
    (30, 33),
    (31, 32),
    (31, 33),
    (32, 33),
];

const KARATE_INSTRUCTOR_FACTION: [usize; 17] =
    [0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 16, 17, 19, 21];

/// Zachary's karate club and the faction (0 = instructor, 1 = officer) each
/// member joined after the split.
pub fn karate_club() -> (CsrGraph, Vec<usize>) {
    let g = CsrGraph::from_edges_unchecked(34, &KARATE_EDGES);
    let faction = (0..34)
        .map(|u| usize::from(!KARATE_INSTRUCTOR_FACTION.contains(&u)))
        .collect();
    (g, faction)
}

/// G(n, p). May contain isolated nodes.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> CsrGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    CsrGraph::from_edges_unchecked(n, &edges)
}

/// Barabási–Albert preferential attachment: each new node links to `m`
/// distinct earlier nodes chosen proportionally to degree.
pub fn preferential_attachment<R: Rng>(n: usize, m: usize, rng: &mut R) -> CsrGraph {
    assert!(m >= 1 && n > m, "need n > m >= 1");
    let mut edges = Vec::with_capacity(n * m);
    // endpoint multiset: sampling uniformly from it is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * m);
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            endpoints.push(u);
            endpoints.push(v);
        }
    }
    let mut chosen = Vec::with_capacity(m);
    for u in m + 1..n {
        chosen.clear();
        while chosen.len() < m {
            let v = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for &v in &chosen {
            edges.push((v, u));
            endpoints.push(v);
            endpoints.push(u);
        }
    }
    CsrGraph::from_edges_unchecked(n, &edges)
}

/// `count` disjoint cliques of `size` nodes; clique `i` holds nodes
/// `i*size..(i+1)*size`.
pub fn disjoint_cliques(count: usize, size: usize) -> CsrGraph {
    let mut edges = Vec::new();
    for c in 0..count {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
    }
    CsrGraph::from_edges_unchecked(count * size, &edges)
}

pub fn star(leaves: usize) -> CsrGraph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    CsrGraph::from_edges_unchecked(leaves + 1, &edges)
}

/// Stochastic block model with equal blocks; node `u` is in block
/// `u % blocks`. Each node gets its block as a label, plus a second label
/// `blocks + (u % 2)` with probability `extra_label`, so the label set is
/// genuinely multi-label.
pub fn planted_partition<R: Rng>(
    n: usize,
    blocks: usize,
    p_in: f64,
    p_out: f64,
    extra_label: f64,
    rng: &mut R,
) -> (CsrGraph, LabelSet) {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if u % blocks == v % blocks {
                p_in
            } else {
                p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let labels = (0..n)
        .map(|u| {
            let mut ls = vec![u % blocks];
            if rng.gen::<f64>() < extra_label {
                ls.push(blocks + (u % 2));
            }
            ls
        })
        .collect();
    let g = CsrGraph::from_edges_unchecked(n, &edges);
    let labels = LabelSet::new(labels, blocks + 2).expect("labels in range");
    (g, labels)
}
