//! Values frozen from networkx 3 and scikit-learn 1.x on the same inputs.

use std::fs;
use std::path::Path;

use lasagne::appr::{exact_ppr, ApprConfig};
use lasagne::eval::{auc, logreg_fit, LogRegConfig};
use lasagne::generators::karate_club;
use lasagne::graph::{conductance, k_core_decomposition};
use lasagne::matrix::Matrix;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// nx.pagerank(G, alpha=1-β, personalization={seed: 1}) with β = 2·0.2/1.2
#[test]
fn karate_ppr_matches_networkx() {
    let (g, _) = karate_club();
    let beta = ApprConfig::default().beta();
    let cases: [(usize, [(usize, f64); 4]); 2] = [
        (
            0,
            [
                (0, 0.42226854131209623),
                (1, 0.05476525917265857),
                (33, 0.02519507723355581),
                (16, 0.011177696681789808),
            ],
        ),
        (
            33,
            [
                (33, 0.4229242275471991),
                (32, 0.07433207848885179),
                (0, 0.02371301386687652),
                (16, 0.000627697425888914),
            ],
        ),
    ];
    for (seed, expect) in cases {
        let pr = exact_ppr(&g, seed, beta).unwrap();
        for (u, want) in expect {
            assert!(
                close(pr[u], want, 1e-12),
                "seed {seed} node {u}: {} vs {want}",
                pr[u]
            );
        }
    }
}

// nx.core_number
#[test]
fn karate_core_numbers_match_networkx() {
    let (g, _) = karate_club();
    let want = [
        4, 4, 4, 4, 3, 3, 3, 4, 4, 2, 3, 1, 2, 4, 2, 2, 2, 2, 2, 3, 2, 2, 2, 3, 3, 3, 2, 3, 3, 3,
        4, 3, 4, 4,
    ];
    assert_eq!(k_core_decomposition(&g), want);
}

// nx.conductance(G, instructor_faction), nx.cut_size
#[test]
fn faction_conductance_matches_networkx() {
    let (g, faction) = karate_club();
    let inst: Vec<usize> = (0..34).filter(|&u| faction[u] == 0).collect();
    let c = conductance(&g, &inst).unwrap();
    assert_eq!(c.cut, 11);
    assert!(close(c.standard, 0.14666666666666667, 1e-15));
}

// LogisticRegression(C=1.0, tol=1e-12) on tests/fixtures/logreg40.txt
#[test]
fn logreg_matches_sklearn() {
    let text = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/logreg40.txt"),
    )
    .unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    let x = Matrix::from_rows(&rows.iter().map(|r| r[..3].to_vec()).collect::<Vec<_>>());
    let y: Vec<bool> = rows.iter().map(|r| r[3] == 1.0).collect();
    let cfg = LogRegConfig {
        tol: 1e-10,
        ..LogRegConfig::default()
    };
    let m = logreg_fit(&x, &y, &cfg).unwrap();
    let want = [2.114536189196327, -1.3215425241750731, 0.20041823845347528];
    for (w, e) in m.weights.iter().zip(want) {
        assert!(close(*w, e, 1e-6), "{:?} vs {want:?}", m.weights);
    }
    assert!(close(m.bias, 0.14097804247693385, 1e-6), "bias {}", m.bias);
}

// roc_auc_score, with one tied pair across classes
#[test]
fn auc_matches_sklearn() {
    let s = [0.1, 0.4, 0.35, 0.8, 0.8, 0.2, 0.55, 0.9];
    let l = [false, false, true, true, false, true, true, true];
    assert!(close(auc(&s, &l).unwrap(), 0.6333333333333333, 1e-15));
}
