//! Immutable undirected graphs in compressed adjacency form.
//!
//! Nodes are dense `0..num_nodes`; the label each node carried in the input
//! file is kept in [`CsrGraph::external_id`] so outputs can be written back
//! in the caller's vocabulary.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Counts of input lines discarded while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub edge_lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrGraph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    external_ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl CsrGraph {
    /// Builds a graph over `num_nodes` nodes named `"0".."n-1"`.
    ///
    /// Edges are symmetrized; self-loops and repeated pairs are dropped and
    /// counted. `directed_input` means both `u v` and `v u` are expected, so
    /// a reciprocal pair is not counted as a duplicate.
    pub fn from_edges(
        num_nodes: usize,
        edges: &[(usize, usize)],
        directed_input: bool,
    ) -> Result<(Self, LoadReport)> {
        let ids = (0..num_nodes).map(|i| i.to_string()).collect();
        Self::build(ids, edges.iter().copied(), directed_input)
    }

    /// Like [`CsrGraph::from_edges`] but panics on out-of-range ids; for
    /// fixtures and generators.
    pub fn from_edges_unchecked(num_nodes: usize, edges: &[(usize, usize)]) -> Self {
        Self::from_edges(num_nodes, edges, false)
            .expect("edge endpoints in range")
            .0
    }

    fn build(
        external_ids: Vec<String>,
        edges: impl Iterator<Item = (usize, usize)>,
        directed_input: bool,
    ) -> Result<(Self, LoadReport)> {
        let n = external_ids.len();
        let mut report = LoadReport::default();
        let mut seen_directed: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::InvalidNode(u));
            }
            if v >= n {
                return Err(Error::InvalidNode(v));
            }
            report.edge_lines += 1;
            if u == v {
                report.self_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            let fresh = if directed_input {
                pairs.insert(key);
                seen_directed.insert((u, v))
            } else {
                pairs.insert(key)
            };
            if !fresh {
                report.duplicates += 1;
            }
        }

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in &pairs {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        let index = external_ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok((
            CsrGraph {
                offsets,
                neighbors,
                external_ids,
                index,
            },
            report,
        ))
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.num_nodes()).map(|u| self.degree(u)).collect()
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_nodes()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn external_id(&self, u: usize) -> &str {
        &self.external_ids[u]
    }

    pub fn external_ids(&self) -> &[String] {
        &self.external_ids
    }

    pub fn node_by_external(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn check_node(&self, u: usize) -> Result<()> {
        if u < self.num_nodes() {
            Ok(())
        } else {
            Err(Error::InvalidNode(u))
        }
    }

    /// Same node set, restricted edge set. External ids are preserved.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> CsrGraph {
        Self::build(self.external_ids.clone(), edges.iter().copied(), false)
            .expect("edges drawn from this graph")
            .0
    }

    /// Component label per node, numbered by smallest member.
    pub fn connected_components(&self) -> Vec<usize> {
        let n = self.num_nodes();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Induced subgraph on the largest connected component; ties go to the
    /// component with the smallest node. Returns the old id of each new node.
    pub fn largest_component(&self) -> (CsrGraph, Vec<usize>) {
        let comp = self.connected_components();
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &comp {
            *sizes.entry(c).or_default() += 1;
        }
        let best = sizes
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&c, _)| c)
            .unwrap_or(0);
        let kept: Vec<usize> = (0..self.num_nodes()).filter(|&u| comp[u] == best).collect();
        let mut remap = vec![usize::MAX; self.num_nodes()];
        for (i, &u) in kept.iter().enumerate() {
            remap[u] = i;
        }
        let ids = kept.iter().map(|&u| self.external_ids[u].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(u, _)| comp[u] == best)
            .map(|(u, v)| (remap[u], remap[v]));
        let (g, _) = Self::build(ids, edges, false).expect("remapped ids in range");
        (g, kept)
    }
}

/// Reads a whitespace-separated edge list. Lines starting with `#` and blank
/// lines are skipped; tokens past the second are ignored.
pub fn load_edge_list(
    path: impl AsRef<Path>,
    directed_input: bool,
) -> Result<(CsrGraph, LoadReport)> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(
        BufReader::new(file),
        &path.display().to_string(),
        directed_input,
    )
}

pub fn parse_edge_list(
    reader: impl BufRead,
    source: &str,
    directed_input: bool,
) -> Result<(CsrGraph, LoadReport)> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> usize {
        if let Some(&i) = index.get(tok) {
            return i;
        }
        let i = ids.len();
        ids.push(tok.to_string());
        index.insert(tok.to_string(), i);
        i
    };
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        match (toks.next(), toks.next()) {
            (Some(a), Some(b)) => {
                let u = intern(a);
                let v = intern(b);
                edges.push((u, v));
            }
            _ => {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line: lineno + 1,
                    msg: format!("expected two node tokens, got {line:?}"),
                })
            }
        }
    }
    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (g, report) = CsrGraph::build(ids, edges.into_iter(), directed_input)?;
    if g.num_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    if report.self_loops + report.duplicates > 0 {
        log::warn!(
            "{source}: dropped {} self-loops and {} duplicate edges",
            report.self_loops,
            report.duplicates
        );
    }
    Ok((g, report))
}

/// Class memberships per node. Nodes may carry no label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<Vec<usize>>,
    class_names: Vec<String>,
}

impl LabelSet {
    /// `labels[u]` lists the classes of node `u`; duplicates are removed.
    pub fn new(mut labels: Vec<Vec<usize>>, num_classes: usize) -> Result<Self> {
        for (u, ls) in labels.iter_mut().enumerate() {
            ls.sort_unstable();
            ls.dedup();
            if let Some(&c) = ls.iter().find(|&&c| c >= num_classes) {
                return Err(Error::InvalidConfig(format!(
                    "node {u} has class {c} >= num_classes {num_classes}"
                )));
            }
        }
        Ok(LabelSet {
            labels,
            class_names: (0..num_classes).map(|c| c.to_string()).collect(),
        })
    }

    /// Single-label convenience constructor.
    pub fn from_assignment(classes: &[usize]) -> Self {
        let k = classes.iter().max().map_or(0, |m| m + 1);
        Self::new(classes.iter().map(|&c| vec![c]).collect(), k).expect("classes in range")
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn labels(&self, u: usize) -> &[usize] {
        &self.labels[u]
    }

    pub fn has_label(&self, u: usize, class: usize) -> bool {
        self.labels[u].binary_search(&class).is_ok()
    }

    pub fn class_name(&self, class: usize) -> &str {
        &self.class_names[class]
    }

    /// Nodes with at least one label, ascending.
    pub fn labeled_nodes(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&u| !self.labels[u].is_empty())
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_classes()];
        for ls in &self.labels {
            for &c in ls {
                sizes[c] += 1;
            }
        }
        sizes
    }
}

/// Reads `node label` pairs; repeated node lines add labels. Class names are
/// sorted (numerically when all are integers) before numbering. Nodes not
/// present in `g` are skipped with a warning.
pub fn load_labels(path: impl AsRef<Path>, g: &CsrGraph) -> Result<LabelSet> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_labels(BufReader::new(file), &path.display().to_string(), g)
}

pub fn parse_labels(reader: impl BufRead, source: &str, g: &CsrGraph) -> Result<LabelSet> {
    parse_labels_with(reader, source, g.num_nodes(), |id| g.node_by_external(id))
}

/// Labels keyed by position in `ids`, for data that comes without a graph
/// (e.g. an embedding file).
pub fn load_labels_for_ids(path: impl AsRef<Path>, ids: &[String]) -> Result<LabelSet> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let index: HashMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    parse_labels_with(
        BufReader::new(file),
        &path.display().to_string(),
        ids.len(),
        |id| index.get(id).copied(),
    )
}

fn parse_labels_with(
    reader: impl BufRead,
    source: &str,
    num_nodes: usize,
    lookup: impl Fn(&str) -> Option<usize>,
) -> Result<LabelSet> {
    let mut raw: Vec<(usize, String)> = Vec::new();
    let mut unknown = 0usize;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let (Some(node), Some(label)) = (toks.next(), toks.next()) else {
            return Err(Error::Parse {
                path: source.to_string(),
                line: lineno + 1,
                msg: format!("expected `node label`, got {line:?}"),
            });
        };
        match lookup(node) {
            Some(u) => raw.push((u, label.to_string())),
            None => unknown += 1,
        }
    }
    if unknown > 0 {
        log::warn!("{source}: {unknown} label lines name nodes absent from the graph");
    }
    let mut names: Vec<String> = raw
        .iter()
        .map(|(_, l)| l.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if names.iter().all(|s| s.parse::<i64>().is_ok()) {
        names.sort_by_key(|s| s.parse::<i64>().unwrap());
    }
    let class_of: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut labels = vec![Vec::new(); num_nodes];
    for (u, l) in &raw {
        labels[*u].push(class_of[l.as_str()]);
    }
    let mut set = LabelSet::new(labels, names.len())?;
    set.class_names = names;
    Ok(set)
}

/// Core number of every node, by bucketed minimum-degree peeling.
pub fn k_core_decomposition(g: &CsrGraph) -> Vec<usize> {
    let n = g.num_nodes();
    let mut deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    // bin sort by degree; pos/order let us move a node down one bucket in O(1)
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let c = *b;
        *b = start;
        start += c;
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0usize; n];
    for u in 0..n {
        pos[u] = bin[deg[u]];
        order[pos[u]] = u;
        bin[deg[u]] += 1;
    }
    for d in (1..=max_deg + 1).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let u = order[i];
        for &v in g.neighbors(u) {
            if deg[v] > deg[u] {
                let dv = deg[v];
                let pv = pos[v];
                let pw = bin[dv];
                let w = order[pw];
                if v != w {
                    order.swap(pv, pw);
                    pos[v] = pw;
                    pos[w] = pv;
                }
                bin[dv] += 1;
                deg[v] -= 1;
            }
        }
    }
    deg
}

/// Both cut-based cluster scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conductance {
    /// cut / min(vol(S), vol(V \ S))
    pub standard: f64,
    /// cut / internal edges; `+inf` when S has a cut but no internal edge
    pub cut_ratio: f64,
    pub cut: usize,
    pub internal_edges: usize,
    pub volume: usize,
}

pub fn conductance(g: &CsrGraph, cluster: &[usize]) -> Result<Conductance> {
    let n = g.num_nodes();
    let mut inside = vec![false; n];
    let mut size = 0;
    for &u in cluster {
        g.check_node(u)?;
        if !inside[u] {
            inside[u] = true;
            size += 1;
        }
    }
    if size == 0 {
        return Err(Error::InvalidCluster("empty cluster".into()));
    }
    if size == n {
        return Err(Error::InvalidCluster("cluster covers every node".into()));
    }
    let mut cut = 0;
    let mut internal_twice = 0;
    let mut volume = 0;
    for u in (0..n).filter(|&u| inside[u]) {
        volume += g.degree(u);
        for &v in g.neighbors(u) {
            if inside[v] {
                internal_twice += 1;
            } else {
                cut += 1;
            }
        }
    }
    let internal_edges = internal_twice / 2;
    let complement_volume = 2 * g.num_edges() - volume;
    let denom = volume.min(complement_volume);
    let standard = if cut == 0 {
        0.0
    } else {
        cut as f64 / denom as f64
    };
    let cut_ratio = match (cut, internal_edges) {
        (0, _) => 0.0,
        (_, 0) => f64::INFINITY,
        (c, i) => c as f64 / i as f64,
    };
    Ok(Conductance {
        standard,
        cut_ratio,
        cut,
        internal_edges,
        volume,
    })
}

/// Unweighted hop distance from `seed` to each target; `None` if unreachable.
pub fn bfs_hops(
    g: &CsrGraph,
    seed: usize,
    targets: &[usize],
) -> Result<BTreeMap<usize, Option<usize>>> {
    g.check_node(seed)?;
    for &t in targets {
        g.check_node(t)?;
    }
    let dist = bfs_distances(g, seed);
    Ok(targets
        .iter()
        .map(|&t| (t, (dist[t] != usize::MAX).then_some(dist[t])))
        .collect())
}

/// Full BFS distance array; unreachable nodes hold `usize::MAX`.
pub fn bfs_distances(g: &CsrGraph, seed: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.num_nodes()];
    let mut queue = VecDeque::new();
    dist[seed] = 0;
    queue.push_back(seed);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<(CsrGraph, LoadReport)> {
        parse_edge_list(s.as_bytes(), "<mem>", false)
    }

    /// Repeatedly delete nodes of degree < k; core[u] is the last k u survives.
    fn brute_force_cores(g: &CsrGraph) -> Vec<usize> {
        let n = g.num_nodes();
        let mut core = vec![0; n];
        for k in 1..=n {
            let mut alive = vec![true; n];
            loop {
                let mut changed = false;
                for u in 0..n {
                    if alive[u] {
                        let d = g.neighbors(u).iter().filter(|&&v| alive[v]).count();
                        if d < k {
                            alive[u] = false;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            for u in 0..n {
                if alive[u] {
                    core[u] = k;
                }
            }
        }
        core
    }

    #[test]
    fn path_file_degrees() {
        let (g, _) = parse("0 1\n1 2").unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn duplicate_and_self_loop_dropped() {
        let (g, report) = parse("0 1\n1 0\n0 0").unwrap();
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(report.duplicates, 1);
        assert_eq!(report.self_loops, 1);
    }

    #[test]
    fn directed_input_reciprocal_is_not_duplicate() {
        let (g, report) = parse_edge_list("0 1\n1 0\n0 1".as_bytes(), "<mem>", true).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(report.duplicates, 1);
    }

    #[test]
    fn comments_and_external_ids() {
        let (g, _) = parse("# header\nalice bob\n\nbob carol extra").unwrap();
        assert_eq!(g.external_id(0), "alice");
        assert_eq!(g.node_by_external("carol"), Some(2));
        assert!(g.has_edge(1, 2));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse("0 1\n2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(parse("# nothing\n"), Err(Error::EmptyGraph)));
        assert!(matches!(parse("3 3\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_edge_list("/definitely/not/here.txt", false),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn kcore_triangle_with_pendant() {
        let g = CsrGraph::from_edges_unchecked(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        assert_eq!(brute_force_cores(&g), vec![2, 2, 2, 1]);
        assert_eq!(k_core_decomposition(&g), vec![2, 2, 2, 1]);
    }

    #[test]
    fn kcore_cycle_and_star() {
        let cycle = CsrGraph::from_edges_unchecked(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(k_core_decomposition(&cycle), vec![2; 5]);
        let star = CsrGraph::from_edges_unchecked(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(brute_force_cores(&star), vec![1; 5]);
        assert_eq!(k_core_decomposition(&star), vec![1; 5]);
    }

    #[test]
    fn kcore_matches_brute_force_on_karate() {
        let g = crate::generators::karate_club().0;
        assert_eq!(k_core_decomposition(&g), brute_force_cores(&g));
    }

    #[test]
    fn conductance_two_triangles() {
        let g = CsrGraph::from_edges_unchecked(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        );
        let c = conductance(&g, &[0, 1, 2]).unwrap();
        assert_eq!(c.cut, 1);
        assert_eq!(c.internal_edges, 3);
        assert!((c.cut_ratio - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.standard - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn conductance_single_node_and_disconnected() {
        let star = CsrGraph::from_edges_unchecked(4, &[(0, 1), (0, 2), (0, 3)]);
        let c = conductance(&star, &[0]).unwrap();
        assert_eq!(c.standard, 1.0);
        assert!(c.cut_ratio.is_infinite());

        let two = CsrGraph::from_edges_unchecked(4, &[(0, 1), (2, 3)]);
        let c = conductance(&two, &[0, 1]).unwrap();
        assert_eq!(c.standard, 0.0);
        assert_eq!(c.cut_ratio, 0.0);
    }

    #[test]
    fn conductance_rejects_empty_and_full() {
        let g = CsrGraph::from_edges_unchecked(2, &[(0, 1)]);
        assert!(matches!(
            conductance(&g, &[]),
            Err(Error::InvalidCluster(_))
        ));
        assert!(matches!(
            conductance(&g, &[0, 1]),
            Err(Error::InvalidCluster(_))
        ));
    }

    #[test]
    fn bfs_examples() {
        let g = CsrGraph::from_edges_unchecked(4, &[(0, 1), (1, 2)]);
        let h = bfs_hops(&g, 0, &[2, 0, 3]).unwrap();
        assert_eq!(h[&2], Some(2));
        assert_eq!(h[&0], Some(0));
        assert_eq!(h[&3], None);
        assert!(matches!(bfs_hops(&g, 9, &[0]), Err(Error::InvalidNode(9))));
    }

    #[test]
    fn largest_component_keeps_ids() {
        let (g, _) = parse("a b\nb c\nx y").unwrap();
        let (lcc, kept) = g.largest_component();
        assert_eq!(lcc.num_nodes(), 3);
        assert_eq!(kept, vec![0, 1, 2]);
        assert_eq!(lcc.external_id(2), "c");
    }

    #[test]
    fn labels_parse_and_multilabel() {
        let (g, _) = parse("a b\nb c").unwrap();
        let labels = parse_labels("a 2\na 10\nb 2\nzz 1\n".as_bytes(), "<mem>", &g).unwrap();
        assert_eq!(labels.num_classes(), 2);
        assert_eq!(labels.class_name(0), "2");
        assert_eq!(labels.labels(0), &[0, 1]);
        assert_eq!(labels.labels(2), &[] as &[usize]);
        assert_eq!(labels.labeled_nodes(), vec![0, 1]);
    }
}
