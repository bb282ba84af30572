use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

/// Outcome of one evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: String,
    /// Class names, or operator names for link prediction.
    pub class_names: Vec<String>,
    /// Positive-class F1 per class; `None` for classes that were skipped.
    pub per_class_f1: Vec<Option<f64>>,
    /// Macro and micro F1 of each fold or repetition.
    pub fold_macro_f1: Vec<f64>,
    pub fold_micro_f1: Vec<f64>,
    pub macro_f1: f64,
    pub micro_f1: f64,
    /// `(operator, AUC)` pairs.
    pub auc: Vec<(String, f64)>,
    pub config: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl EvalReport {
    pub fn new(protocol: &str) -> Self {
        EvalReport {
            protocol: protocol.to_string(),
            class_names: Vec::new(),
            per_class_f1: Vec::new(),
            fold_macro_f1: Vec::new(),
            fold_micro_f1: Vec::new(),
            macro_f1: 0.0,
            micro_f1: 0.0,
            auc: Vec::new(),
            config: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn skipped_classes(&self) -> Vec<usize> {
        (0..self.per_class_f1.len())
            .filter(|&c| self.per_class_f1[c].is_none())
            .collect()
    }

    pub fn auc_of(&self, op: &str) -> Option<f64> {
        self.auc.iter().find(|(o, _)| o == op).map(|&(_, a)| a)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_string(), value.to_string()));
    }

    fn scores(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_class_f1
            .iter()
            .flatten()
            .chain(&self.fold_macro_f1)
            .chain(&self.fold_micro_f1)
            .chain([&self.macro_f1, &self.micro_f1])
            .chain(self.auc.iter().map(|(_, a)| a))
            .copied()
    }

    /// Every score lies in `[0, 1]` and the class array is complete.
    pub fn is_consistent(&self) -> bool {
        self.per_class_f1.len() == self.class_names.len()
            && self.scores().all(|s| (0.0..=1.0).contains(&s))
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "protocol: {}", self.protocol);
        for (k, v) in &self.config {
            let _ = writeln!(s, "  {k} = {v}");
        }
        if !self.per_class_f1.is_empty() {
            let _ = writeln!(
                s,
                "macro-F1 {:.4}  micro-F1 {:.4}",
                self.macro_f1, self.micro_f1
            );
            if !self.fold_macro_f1.is_empty() {
                let _ = writeln!(s, "{:>6} {:>9} {:>9}", "fold", "macro-F1", "micro-F1");
                for (i, (a, b)) in self
                    .fold_macro_f1
                    .iter()
                    .zip(&self.fold_micro_f1)
                    .enumerate()
                {
                    let _ = writeln!(s, "{i:>6} {a:>9.4} {b:>9.4}");
                }
            }
            let _ = writeln!(s, "{:<24} {:>8}", "class", "F1");
            for (name, f) in self.class_names.iter().zip(&self.per_class_f1) {
                match f {
                    Some(f) => {
                        let _ = writeln!(s, "{name:<24} {f:>8.4}");
                    }
                    None => {
                        let _ = writeln!(s, "{name:<24} {:>8}", "skipped");
                    }
                }
            }
        }
        if !self.auc.is_empty() {
            let _ = writeln!(s, "{:<12} {:>8}", "operator", "AUC");
            for (op, a) in &self.auc {
                let _ = writeln!(s, "{op:<12} {a:>8.4}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// One metric per line: `protocol target fold metric value`, tab
    /// separated. `target` is a class or operator name, or `all`; `fold` is
    /// a fold index or `all`.
    pub fn write_kv(&self, mut w: impl Write) -> std::io::Result<()> {
        let p = &self.protocol;
        writeln!(w, "protocol\ttarget\tfold\tmetric\tvalue")?;
        writeln!(w, "{p}\tall\tall\tmacro_f1\t{}", self.macro_f1)?;
        writeln!(w, "{p}\tall\tall\tmicro_f1\t{}", self.micro_f1)?;
        for (i, (a, b)) in self
            .fold_macro_f1
            .iter()
            .zip(&self.fold_micro_f1)
            .enumerate()
        {
            writeln!(w, "{p}\tall\t{i}\tmacro_f1\t{a}")?;
            writeln!(w, "{p}\tall\t{i}\tmicro_f1\t{b}")?;
        }
        for (name, f) in self.class_names.iter().zip(&self.per_class_f1) {
            match f {
                Some(f) => writeln!(w, "{p}\t{name}\tall\tf1\t{f}")?,
                None => writeln!(w, "{p}\t{name}\tall\tf1\tskipped")?,
            }
        }
        for (op, a) in &self.auc {
            writeln!(w, "{p}\t{op}\tall\tauc\t{a}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> crate::Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Format(format!("report: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> EvalReport {
        let mut r = EvalReport::new("former");
        r.class_names = vec!["a".into(), "b".into()];
        r.per_class_f1 = vec![Some(0.5), None];
        r.fold_macro_f1 = vec![0.4, 0.6];
        r.fold_micro_f1 = vec![0.5, 0.7];
        r.macro_f1 = 0.5;
        r.micro_f1 = 0.6;
        r.set("train_fraction", 0.9);
        r
    }

    #[test]
    fn table_and_kv() {
        let r = sample();
        assert!(r.is_consistent());
        let t = r.to_table();
        assert!(t.contains("protocol: former"));
        assert!(t.contains("train_fraction = 0.9"));
        assert!(t.contains("skipped"));
        let mut kv = Vec::new();
        r.write_kv(&mut kv).unwrap();
        let kv = String::from_utf8(kv).unwrap();
        assert!(kv.contains("former\tall\t1\tmacro_f1\t0.6\n"));
        assert!(kv.contains("former\tb\tall\tf1\tskipped\n"));
        assert_eq!(r.skipped_classes(), vec![1]);
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(EvalReport::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn out_of_range_detected() {
        let mut r = sample();
        r.auc.push(("hadamard".into(), 1.5));
        assert!(!r.is_consistent());
    }
}
