use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

const BINARY_MAGIC: &[u8; 8] = b"LSGNEMB1";

/// Embeddings with the external node ids they belong to, row `i` for `ids[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingFile {
    pub ids: Vec<String>,
    pub matrix: Matrix,
}

impl EmbeddingFile {
    pub fn new(ids: Vec<String>, matrix: Matrix) -> Result<Self> {
        if ids.len() != matrix.rows() {
            return Err(Error::DimensionMismatch(ids.len(), matrix.rows()));
        }
        Ok(EmbeddingFile { ids, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.cols()
    }

    /// Rows reordered to follow `order` (external ids); ids missing from
    /// the file are an error.
    pub fn aligned_to(&self, order: &[String]) -> Result<Matrix> {
        let index: std::collections::HashMap<&str, usize> = self
            .ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut rows = Vec::with_capacity(order.len());
        for id in order {
            match index.get(id.as_str()) {
                Some(&i) => rows.push(i),
                None => return Err(Error::Format(format!("no embedding for node {id}"))),
            }
        }
        Ok(self.matrix.select_rows(&rows))
    }
}

/// Text layout: header `N d`, then `id v1 .. vd` per line. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_embeddings_text(w: impl Write, ids: &[String], m: &Matrix) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for (i, id) in ids.iter().enumerate() {
        w.write_all(id.as_bytes())?;
        for x in m.row(i) {
            write!(w, " {x}")?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()
}

pub fn read_embeddings_text(r: impl BufRead, source: &str) -> Result<EmbeddingFile> {
    let perr = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let mut lines = r.lines().enumerate();
    let (n, d) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(perr(1, "missing header".into()));
        };
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let n = it.next().and_then(|t| t.parse::<usize>().ok());
        let d = it.next().and_then(|t| t.parse::<usize>().ok());
        match (n, d, it.next()) {
            (Some(n), Some(d), None) => break (n, d),
            _ => {
                return Err(perr(
                    i + 1,
                    format!("bad header {line:?}, expected \"N d\""),
                ))
            }
        }
    };
    let mut ids = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * d);
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let id = it.next().unwrap().to_string();
        let before = data.len();
        for t in it {
            let x: f64 = t
                .parse()
                .map_err(|_| perr(i + 1, format!("bad value {t:?}")))?;
            data.push(x);
        }
        if data.len() - before != d {
            return Err(perr(
                i + 1,
                format!("expected {d} values, got {}", data.len() - before),
            ));
        }
        ids.push(id);
    }
    if ids.len() != n {
        return Err(Error::Format(format!(
            "{source}: header says {n} rows, found {}",
            ids.len()
        )));
    }
    EmbeddingFile::new(ids, Matrix::from_vec(n, d, data))
}

/// Binary layout: magic, `u64` N, `u64` d, then per row a `u32` id length,
/// the id bytes and d little-endian `f64`.
pub fn write_embeddings_binary(w: impl Write, ids: &[String], m: &Matrix) -> std::io::Result<()> {
    let mut w = BufWriter::new(w);
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(m.rows() as u64).to_le_bytes())?;
    w.write_all(&(m.cols() as u64).to_le_bytes())?;
    for (i, id) in ids.iter().enumerate() {
        w.write_all(&(id.len() as u32).to_le_bytes())?;
        w.write_all(id.as_bytes())?;
        for x in m.row(i) {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()
}

pub fn read_embeddings_binary(mut r: impl Read, source: &str) -> Result<EmbeddingFile> {
    let io = |e: std::io::Error| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Format(format!("{source}: truncated embedding file"))
        } else {
            Error::io(source, e)
        }
    };
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::Format(format!(
            "{source}: not a binary embedding file"
        )));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8).map_err(io)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8).map_err(io)?;
    let d = u64::from_le_bytes(b8) as usize;
    let mut ids = Vec::with_capacity(n.min(1 << 20));
    let mut data = Vec::with_capacity((n * d).min(1 << 24));
    for _ in 0..n {
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4).map_err(io)?;
        let mut id = vec![0u8; u32::from_le_bytes(b4) as usize];
        r.read_exact(&mut id).map_err(io)?;
        ids.push(
            String::from_utf8(id)
                .map_err(|_| Error::Format(format!("{source}: id is not UTF-8")))?,
        );
        for _ in 0..d {
            r.read_exact(&mut b8).map_err(io)?;
            data.push(f64::from_le_bytes(b8));
        }
    }
    EmbeddingFile::new(ids, Matrix::from_vec(n, d, data))
}

/// Reads either layout, chosen by the leading magic bytes.
pub fn read_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingFile> {
    let path = path.as_ref();
    let src = path.display().to_string();
    let mut r = BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?);
    let head = r.fill_buf().map_err(|e| Error::io(path, e))?;
    if head.starts_with(BINARY_MAGIC) {
        read_embeddings_binary(r, &src)
    } else {
        read_embeddings_text(r, &src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Vec<String>, Matrix) {
        let ids = vec!["a".to_string(), "17".to_string(), "x-y".to_string()];
        let m = Matrix::from_rows(&[
            vec![0.1, -2.5e-300, 3.0],
            vec![1.0 / 3.0, 0.0, -0.0],
            vec![f64::MAX, f64::MIN_POSITIVE, 7.25],
        ]);
        (ids, m)
    }

    #[test]
    fn text_round_trip_is_exact() {
        let (ids, m) = sample();
        let mut buf = Vec::new();
        write_embeddings_text(&mut buf, &ids, &m).unwrap();
        assert!(buf.starts_with(b"3 3\n"));
        let back = read_embeddings_text(&buf[..], "mem").unwrap();
        assert_eq!(back.ids, ids);
        assert_eq!(back.matrix, m);
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let (ids, m) = sample();
        let mut buf = Vec::new();
        write_embeddings_binary(&mut buf, &ids, &m).unwrap();
        let back = read_embeddings_binary(&buf[..], "mem").unwrap();
        assert_eq!(back.ids, ids);
        assert_eq!(back.matrix, m);
        assert!(read_embeddings_binary(&buf[..buf.len() - 3], "mem").is_err());
    }

    #[test]
    fn autodetect() {
        let (ids, m) = sample();
        let dir = tempfile::tempdir().unwrap();
        let t = dir.path().join("e.txt");
        let b = dir.path().join("e.bin");
        write_embeddings_text(File::create(&t).unwrap(), &ids, &m).unwrap();
        write_embeddings_binary(File::create(&b).unwrap(), &ids, &m).unwrap();
        assert_eq!(read_embeddings(&t).unwrap(), read_embeddings(&b).unwrap());
    }

    #[test]
    fn malformed_text() {
        assert!(read_embeddings_text(&b"2 2\na 1 2\nb 1\n"[..], "m").is_err());
        assert!(read_embeddings_text(&b"2 2\na 1 2\n"[..], "m").is_err());
        assert!(read_embeddings_text(&b"x\n"[..], "m").is_err());
        assert!(read_embeddings_text(&b"1 1\na nope\n"[..], "m").is_err());
    }

    #[test]
    fn alignment() {
        let (ids, m) = sample();
        let f = EmbeddingFile::new(ids, m.clone()).unwrap();
        let a = f.aligned_to(&["x-y".into(), "a".into()]).unwrap();
        assert_eq!(a.row(0), m.row(2));
        assert!(f.aligned_to(&["zz".into()]).is_err());
    }
}
