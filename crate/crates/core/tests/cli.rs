use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lasagne::eval::EvalReport;
use lasagne::sgns::read_embeddings;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn lasagne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lasagne"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = lasagne(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SMALL: [&str; 4] = ["--dim", "8", "--max-batches", "100"];

#[test]
fn embed_equals_appr_then_train() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("karate.edges");
    let sidecar = dir.path().join("k.appr");
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    ok(&[
        "appr",
        "--edges",
        s(&edges),
        "--alpha",
        "0.3",
        "--out",
        s(&sidecar),
    ]);
    ok(&[
        &["train", "--appr", s(&sidecar), "--out", s(&a)][..],
        &SMALL,
    ]
    .concat());
    ok(&[
        &[
            "embed",
            "--edges",
            s(&edges),
            "--alpha",
            "0.3",
            "--out",
            s(&b),
        ][..],
        &SMALL,
    ]
    .concat());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let emb = read_embeddings(&a).unwrap();
    assert_eq!((emb.ids.len(), emb.dim()), (34, 8));
}

#[test]
fn binary_and_text_hold_the_same_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("karate.edges");
    let (t, b) = (dir.path().join("e.txt"), dir.path().join("e.bin"));
    ok(&[&["embed", "--edges", s(&edges), "--out", s(&t)][..], &SMALL].concat());
    ok(&[
        &["embed", "--edges", s(&edges), "--binary", "--out", s(&b)][..],
        &SMALL,
    ]
    .concat());
    let (t, b) = (read_embeddings(&t).unwrap(), read_embeddings(&b).unwrap());
    assert_eq!(t.ids, b.ids);
    assert_eq!(t.matrix, b.matrix);
}

#[test]
fn alpha_sweep_writes_one_file_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.appr");
    ok(&[
        "appr",
        "--edges",
        s(&fixture("karate.edges")),
        "--alpha",
        "0.1,0.4",
        "--out",
        s(&out),
    ]);
    assert!(dir.path().join("k.alpha0.1.appr").is_file());
    assert!(dir.path().join("k.alpha0.4.appr").is_file());
    assert!(dir.path().join("k.appr.manifest.json").is_file());
}

#[test]
fn manifest_replays_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("karate.edges");
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    ok(&[
        "embed",
        "--edges",
        s(&edges),
        "--dim",
        "6",
        "--negatives",
        "3",
        "--max-batches",
        "50",
        "--seed",
        "9",
        "--out",
        s(&a),
    ]);
    let manifest = dir.path().join("a.txt.manifest.json");
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(doc["parameters"]["dim"], 6);
    assert_eq!(doc["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    ok(&[
        "--config",
        s(&manifest),
        "embed",
        "--edges",
        s(&edges),
        "--out",
        s(&b),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn toml_config_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "dim = 5\nmax_batches = 20\n").unwrap();
    let out = dir.path().join("e.txt");
    let edges = fixture("karate.edges");
    ok(&[
        "--config",
        s(&cfg),
        "embed",
        "--edges",
        s(&edges),
        "--out",
        s(&out),
    ]);
    assert_eq!(read_embeddings(&out).unwrap().dim(), 5);
    ok(&[
        "--config",
        s(&cfg),
        "embed",
        "--edges",
        s(&edges),
        "--dim",
        "7",
        "--out",
        s(&out),
    ]);
    assert_eq!(read_embeddings(&out).unwrap().dim(), 7);
    fs::write(&cfg, "dims = 5\n").unwrap();
    assert_eq!(
        lasagne(&[
            "--config",
            s(&cfg),
            "embed",
            "--edges",
            s(&edges),
            "--out",
            s(&out)
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn multilabel_reports() {
    let dir = tempfile::tempdir().unwrap();
    let emb = dir.path().join("e.txt");
    ok(&[
        &[
            "embed",
            "--edges",
            s(&fixture("karate.edges")),
            "--out",
            s(&emb),
        ][..],
        &SMALL,
    ]
    .concat());
    for (protocol, extra) in [("former", "--repetitions=3"), ("realistic", "--folds=4")] {
        let prefix = dir.path().join(protocol);
        let out = ok(&[
            "eval-multilabel",
            "--embeddings",
            s(&emb),
            "--labels",
            s(&fixture("karate.labels")),
            "--protocol",
            protocol,
            extra,
            "--out",
            s(&prefix),
        ]);
        assert!(String::from_utf8_lossy(&out.stdout).contains("macro-F1"));
        let report = EvalReport::from_json(
            &fs::read_to_string(dir.path().join(format!("{protocol}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(report.protocol, protocol);
        assert!(report.is_consistent());
        let tsv = fs::read_to_string(dir.path().join(format!("{protocol}.tsv"))).unwrap();
        assert!(tsv.starts_with("protocol\ttarget\tfold\tmetric\tvalue"));
    }
}

#[test]
fn linkpred_report() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("lp");
    ok(&[
        "eval-linkpred",
        "--edges",
        s(&fixture("karate.edges")),
        "--ops",
        "hadamard,l2",
        "--jaccard-k",
        "5",
        "--dim",
        "8",
        "--max-batches",
        "100",
        "--out",
        s(&prefix),
    ]);
    let report =
        EvalReport::from_json(&fs::read_to_string(dir.path().join("lp.json")).unwrap()).unwrap();
    let names: Vec<&str> = report.auc.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["hadamard", "l2", "jaccard"]);
}

#[test]
fn diagnostics_write_long_csv() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("karate.edges");
    let labels = fixture("karate.labels");
    let runs: [(&str, Vec<&str>); 4] = [
        ("hops", vec!["--source", "walks", "--walk-len", "10"]),
        ("instances", vec!["--budget", "100"]),
        ("kcore", vec!["--labels", s(&labels)]),
        ("walks", vec!["--walk-len", "5"]),
    ];
    for (kind, extra) in runs {
        let out = dir.path().join(kind);
        ok(&[
            &["diag", kind, "--edges", s(&edges), "--out", s(&out)][..],
            &extra,
        ]
        .concat());
        let text = fs::read_to_string(&out).unwrap();
        if kind == "walks" {
            assert_eq!(text.lines().count(), 340);
        } else {
            let mut lines = text.lines();
            assert!(lines.next().unwrap().starts_with("# "));
            assert_eq!(lines.next(), Some("key,statistic,value"));
            assert!(lines.all(|l| l.split(',').count() == 3));
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let edges = fixture("karate.edges");
    assert_eq!(
        lasagne(&[
            "embed",
            "--edges",
            s(&edges),
            "--alpha",
            "1.5",
            "--out",
            s(&out)
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(lasagne(&["embed", "--out", s(&out)]).status.code(), Some(1));
    assert_eq!(
        lasagne(&["embed", "--edges", "/no/such/file", "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "0 1\n2\n").unwrap();
    assert_eq!(
        lasagne(&["appr", "--edges", s(&bad), "--out", s(&out)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lasagne(&["--version"]).status.code(), Some(0));
}
