use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{ApprConfig, ApprVector};
use crate::error::{Error, Result};
use crate::graph::CsrGraph;

#[derive(Debug, Clone, Copy)]
struct HeapEntry {
    priority: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // max-heap on priority; equal priorities pop the smaller node first
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Dense scratch arrays for one push run, reset lazily through the touched
/// list so a workspace can be reused across seeds.
#[derive(Debug, Default)]
pub struct PushWorkspace {
    p: Vec<f64>,
    r: Vec<f64>,
    touched: Vec<usize>,
    is_touched: Vec<bool>,
    heap: BinaryHeap<HeapEntry>,
}

impl PushWorkspace {
    pub fn new(num_nodes: usize) -> Self {
        PushWorkspace {
            p: vec![0.0; num_nodes],
            r: vec![0.0; num_nodes],
            touched: Vec::new(),
            is_touched: vec![false; num_nodes],
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, num_nodes: usize) {
        if self.p.len() != num_nodes {
            *self = Self::new(num_nodes);
            return;
        }
        for &u in &self.touched {
            self.p[u] = 0.0;
            self.r[u] = 0.0;
            self.is_touched[u] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    #[inline]
    fn touch(&mut self, u: usize) {
        if !self.is_touched[u] {
            self.is_touched[u] = true;
            self.touched.push(u);
        }
    }
}

/// A push run that can be advanced one pop at a time, exposing the
/// solution and residual vectors between steps.
pub struct ApprPush<'a> {
    graph: &'a CsrGraph,
    seed: usize,
    cfg: ApprConfig,
    ws: &'a mut PushWorkspace,
    sum_updates: f64,
    last_share: f64,
    pushes: usize,
    non_seed_pushes: usize,
    done: bool,
}

impl<'a> ApprPush<'a> {
    pub fn new(
        graph: &'a CsrGraph,
        seed: usize,
        cfg: ApprConfig,
        ws: &'a mut PushWorkspace,
    ) -> Result<Self> {
        cfg.validate()?;
        graph.check_node(seed)?;
        let d = graph.degree(seed);
        if d == 0 {
            return Err(Error::IsolatedNode(seed));
        }
        ws.reset(graph.num_nodes());
        ws.r[seed] = 1.0;
        ws.touch(seed);
        ws.heap.push(HeapEntry {
            priority: 1.0 / d as f64,
            node: seed,
        });
        Ok(ApprPush {
            graph,
            seed,
            cfg,
            ws,
            sum_updates: 0.0,
            last_share: 1.0,
            pushes: 0,
            non_seed_pushes: 0,
            done: false,
        })
    }

    /// Performs one push and returns the node pushed, or `None` once the
    /// significance threshold is reached or the heap is exhausted.
    pub fn step(&mut self) -> Option<usize> {
        if self.done || self.last_share <= self.cfg.delta {
            self.done = true;
            return None;
        }
        let g = self.graph;
        let u = loop {
            let Some(entry) = self.ws.heap.pop() else {
                self.done = true;
                return None;
            };
            let u = entry.node;
            let current = self.ws.r[u] / g.degree(u) as f64;
            // lazy deletion: only the entry matching the live residual counts
            if self.ws.r[u] > 0.0 && entry.priority.to_bits() == current.to_bits() {
                break u;
            }
        };

        let ru = self.ws.r[u];
        let prob_update = self.cfg.beta() * ru;
        if u != self.seed {
            self.sum_updates += prob_update;
            self.last_share = prob_update / self.sum_updates;
            self.non_seed_pushes += 1;
        }
        self.ws.p[u] += prob_update;

        let du = g.degree(u);
        let neigh_update = self.cfg.spread() * ru / du as f64;
        for &v in g.neighbors(u) {
            self.ws.r[v] += neigh_update;
            self.ws.touch(v);
            self.ws.heap.push(HeapEntry {
                priority: self.ws.r[v] / g.degree(v) as f64,
                node: v,
            });
        }
        self.ws.r[u] = 0.0;
        self.pushes += 1;
        Some(u)
    }

    /// Steps until termination; returns the number of pushes made.
    pub fn run(&mut self) -> usize {
        let before = self.pushes;
        while self.step().is_some() {}
        self.pushes - before
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn solution(&self, u: usize) -> f64 {
        self.ws.p[u]
    }

    pub fn residual(&self, u: usize) -> f64 {
        self.ws.r[u]
    }

    /// Nonzero solution entries, sorted by node.
    pub fn solution_entries(&self) -> Vec<(usize, f64)> {
        self.collect(|ws, u| ws.p[u])
    }

    /// Nonzero residual entries, sorted by node.
    pub fn residual_entries(&self) -> Vec<(usize, f64)> {
        self.collect(|ws, u| ws.r[u])
    }

    fn collect(&self, f: impl Fn(&PushWorkspace, usize) -> f64) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .ws
            .touched
            .iter()
            .map(|&u| (u, f(self.ws, u)))
            .filter(|&(_, x)| x > 0.0)
            .collect();
        out.sort_unstable_by_key(|&(u, _)| u);
        out
    }

    pub fn pushes(&self) -> usize {
        self.pushes
    }

    pub fn non_seed_pushes(&self) -> usize {
        self.non_seed_pushes
    }

    /// Share of the accumulated non-seed updates made by the latest one.
    pub fn last_share(&self) -> f64 {
        self.last_share
    }

    /// Packages the current state, applying the seed replacement unless the
    /// config disables it.
    pub fn finish(self) -> Result<ApprVector> {
        let mut entries = self.solution_entries();
        let residual_l1 = self.ws.touched.iter().map(|&u| self.ws.r[u]).sum();
        let max_other = entries
            .iter()
            .filter(|&&(u, _)| u != self.seed)
            .map(|&(_, m)| m)
            .fold(None, |acc: Option<f64>, m| {
                Some(acc.map_or(m, |a| a.max(m)))
            });
        let Some(max_other) = max_other else {
            return Err(Error::DegenerateAppr(self.seed));
        };
        if !self.cfg.skip_seed_replacement {
            match entries.binary_search_by_key(&self.seed, |&(u, _)| u) {
                Ok(i) => entries[i].1 = max_other,
                Err(i) => entries.insert(i, (self.seed, max_other)),
            }
        }
        Ok(ApprVector {
            seed: self.seed,
            entries,
            residual_l1,
            num_pushes: self.pushes,
            non_seed_pushes: self.non_seed_pushes,
        })
    }
}
