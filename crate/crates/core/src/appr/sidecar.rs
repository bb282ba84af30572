//! Text sidecar holding precomputed APPR vectors.
//!
//! ```text
//! lasagne-appr 1
//! nodes <N> alpha <a> delta <d>
//! <external-id> <degree>                       (N lines, internal id order)
//! vectors <M>
//! <seed> <pushes> <non-seed-pushes> <residual> <k> <node> <mass> ...   (M lines)
//! ```
//!
//! Reals use Rust's shortest round-trip formatting, so a write/read cycle
//! reproduces every bit.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{ApprConfig, ApprVector};
use crate::error::{Error, Result};
use crate::graph::CsrGraph;

const MAGIC: &str = "lasagne-appr 1";

/// Everything training needs without the original edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct ApprSidecar {
    pub external_ids: Vec<String>,
    pub degrees: Vec<usize>,
    pub alpha: f64,
    pub delta: f64,
    pub vectors: Vec<ApprVector>,
}

impl ApprSidecar {
    pub fn new(g: &CsrGraph, cfg: &ApprConfig, vectors: Vec<ApprVector>) -> Self {
        ApprSidecar {
            external_ids: g.external_ids().to_vec(),
            degrees: g.degrees(),
            alpha: cfg.alpha,
            delta: cfg.delta,
            vectors,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.external_ids.len()
    }

    pub fn write_to(&self, w: impl Write) -> std::io::Result<()> {
        let mut w = BufWriter::new(w);
        writeln!(w, "{MAGIC}")?;
        writeln!(
            w,
            "nodes {} alpha {} delta {}",
            self.num_nodes(),
            self.alpha,
            self.delta
        )?;
        for (id, d) in self.external_ids.iter().zip(&self.degrees) {
            writeln!(w, "{id} {d}")?;
        }
        writeln!(w, "vectors {}", self.vectors.len())?;
        for v in &self.vectors {
            write!(
                w,
                "{} {} {} {} {}",
                v.seed,
                v.num_pushes,
                v.non_seed_pushes,
                v.residual_l1,
                v.entries.len()
            )?;
            for &(u, m) in &v.entries {
                write!(w, " {u} {m}")?;
            }
            writeln!(w)?;
        }
        w.flush()
    }

    pub fn read_from(r: impl BufRead, source: &str) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, Ok(l))) => Ok((i + 1, l)),
                Some((_, Err(e))) => Err(Error::io(source, e)),
                None => Err(Error::Format(format!("{source}: truncated before {what}"))),
            }
        };
        let bad = |line: usize, msg: &str| Error::Parse {
            path: source.to_string(),
            line,
            msg: msg.to_string(),
        };

        let (ln, magic) = next("header")?;
        if magic.trim() != MAGIC {
            return Err(bad(ln, "not an APPR sidecar"));
        }
        let (ln, head) = next("node header")?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        let (n, alpha, delta) = match toks.as_slice() {
            ["nodes", n, "alpha", a, "delta", d] => (
                n.parse::<usize>().map_err(|_| bad(ln, "bad node count"))?,
                a.parse::<f64>().map_err(|_| bad(ln, "bad alpha"))?,
                d.parse::<f64>().map_err(|_| bad(ln, "bad delta"))?,
            ),
            _ => return Err(bad(ln, "expected `nodes N alpha A delta D`")),
        };
        let mut external_ids = Vec::with_capacity(n);
        let mut degrees = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, l) = next("node table")?;
            let mut t = l.split_whitespace();
            let (Some(id), Some(d)) = (t.next(), t.next()) else {
                return Err(bad(ln, "expected `id degree`"));
            };
            external_ids.push(id.to_string());
            degrees.push(d.parse().map_err(|_| bad(ln, "bad degree"))?);
        }
        let (ln, l) = next("vector count")?;
        let m: usize = l
            .strip_prefix("vectors ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad(ln, "expected `vectors M`"))?;
        let mut vectors = Vec::with_capacity(m);
        for _ in 0..m {
            let (ln, l) = next("vector")?;
            let t: Vec<&str> = l.split_whitespace().collect();
            if t.len() < 5 {
                return Err(bad(ln, "short vector line"));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(ln, "bad integer"));
            let real = |s: &str| s.parse::<f64>().map_err(|_| bad(ln, "bad real"));
            let k = num(t[4])?;
            if t.len() != 5 + 2 * k {
                return Err(bad(ln, "entry count does not match"));
            }
            let mut entries = Vec::with_capacity(k);
            for j in 0..k {
                let u = num(t[5 + 2 * j])?;
                if u >= n {
                    return Err(bad(ln, "entry node out of range"));
                }
                entries.push((u, real(t[6 + 2 * j])?));
            }
            let seed = num(t[0])?;
            if seed >= n {
                return Err(bad(ln, "seed out of range"));
            }
            vectors.push(ApprVector {
                seed,
                num_pushes: num(t[1])?,
                non_seed_pushes: num(t[2])?,
                residual_l1: real(t[3])?,
                entries,
            });
        }
        Ok(ApprSidecar {
            external_ids,
            degrees,
            alpha,
            delta,
            vectors,
        })
    }
}

pub fn write_sidecar(path: impl AsRef<Path>, sidecar: &ApprSidecar) -> Result<()> {
    let path = path.as_ref();
    let f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    sidecar.write_to(f).map_err(|e| Error::io(path, e))
}

pub fn read_sidecar(path: impl AsRef<Path>) -> Result<ApprSidecar> {
    let path = path.as_ref();
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    ApprSidecar::read_from(BufReader::new(f), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::appr::compute_all_appr;

    #[test]
    fn round_trip_is_exact() {
        let (g, _) = crate::generators::karate_club();
        let cfg = ApprConfig::default();
        let batch = compute_all_appr(&g, &cfg).unwrap();
        let sc = ApprSidecar::new(&g, &cfg, batch.vectors);
        let mut buf = Vec::new();
        sc.write_to(&mut buf).unwrap();
        let back = ApprSidecar::read_from(buf.as_slice(), "<mem>").unwrap();
        assert_eq!(sc, back);
    }

    #[test]
    fn rejects_garbage() {
        assert!(ApprSidecar::read_from("hello\n".as_bytes(), "<mem>").is_err());
        let truncated = "lasagne-appr 1\nnodes 2 alpha 0.2 delta 0.0001\na 1\n";
        assert!(matches!(
            ApprSidecar::read_from(truncated.as_bytes(), "<mem>"),
            Err(Error::Format(_))
        ));
    }
}
