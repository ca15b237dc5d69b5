//! Integral maximum submodular flow where the boundary constraint is a
//! disjoint sum of six-node blocks.
//!
//! Nodes outside blocks (other than source and sink) must conserve flow.
//! The boundary of a flow at node `v` is inflow minus outflow; on each block
//! it has to lie in the block's base polyhedron.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::bisubmodular::{SignedBlock, BLOCK};

/// Capacity sentinel for uncapacitated edges.
pub const INF: i64 = i64::MAX / 4;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SubflowError {
    #[error("an augmenting path has unbounded capacity")]
    Unbounded,
    #[error("block constraint blocks augmentation along a shortest path")]
    ExchangeConflict,
    #[error("cut must contain the source and avoid the sink")]
    CutShape,
    #[error("block nodes overlap or include source/sink")]
    BadBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
}

#[derive(Debug, Clone)]
struct Block {
    nodes: [usize; BLOCK],
    func: SignedBlock,
}

#[derive(Debug, Clone)]
pub struct SubflowNetwork {
    n: usize,
    source: usize,
    sink: usize,
    edges: Vec<Edge>,
    blocks: Vec<Block>,
    block_of: Vec<Option<(usize, usize)>>,
}

#[derive(Debug, Clone, Copy)]
enum Arc {
    Forward(usize),
    Backward(usize),
    Exchange(usize, usize, usize),
}

#[derive(Debug, Clone)]
pub struct SubflowResult {
    pub flow: Vec<i64>,
    pub value: i64,
    /// Source side of the minimal minimum cut.
    pub min_cut: Vec<bool>,
    pub augmentations: usize,
}

impl SubflowNetwork {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        assert!(source != sink && source < n && sink < n);
        SubflowNetwork { n, source, sink, edges: Vec::new(), blocks: Vec::new(), block_of: vec![None; n] }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: i64) -> usize {
        assert!(cap >= 0 && from < self.n && to < self.n && from != to);
        self.edges.push(Edge { from, to, cap: cap.min(INF) });
        self.edges.len() - 1
    }

    /// Attaches a block; `nodes[k]` plays signed element `k`.
    pub fn add_block(&mut self, nodes: [usize; BLOCK], b: i64) -> Result<usize, SubflowError> {
        let idx = self.blocks.len();
        for &v in &nodes {
            if v == self.source || v == self.sink || self.block_of[v].is_some() {
                return Err(SubflowError::BadBlock);
            }
        }
        for (k, &v) in nodes.iter().enumerate() {
            self.block_of[v] = Some((idx, k));
        }
        self.blocks.push(Block { nodes, func: SignedBlock::new(b) });
        Ok(idx)
    }

    pub fn block_nodes(&self) -> impl Iterator<Item = &[usize; BLOCK]> {
        self.blocks.iter().map(|b| &b.nodes)
    }

    /// Submodular part of the cut function on a node set.
    pub fn rho(&self, side: &[bool]) -> i64 {
        self.blocks
            .iter()
            .map(|blk| {
                let mask = blk.nodes.iter().enumerate().fold(0u8, |m, (k, &v)| m | (side[v] as u8) << k);
                blk.func.value(mask)
            })
            .sum()
    }

    /// Cut capacity of a source side; `None` when an uncapacitated edge leaves it.
    pub fn cut_capacity(&self, side: &[bool]) -> Result<Option<i64>, SubflowError> {
        if !side[self.source] || side[self.sink] {
            return Err(SubflowError::CutShape);
        }
        let mut total = self.rho(side);
        for e in &self.edges {
            if side[e.from] && !side[e.to] {
                if e.cap >= INF {
                    return Ok(None);
                }
                total += e.cap;
            }
        }
        Ok(Some(total))
    }

    pub fn boundary(&self, flow: &[i64]) -> Vec<i64> {
        let mut b = vec![0; self.n];
        for (e, &f) in self.edges.iter().zip(flow) {
            b[e.from] -= f;
            b[e.to] += f;
        }
        b
    }

    fn block_vector(&self, blk: usize, boundary: &[i64]) -> [i64; BLOCK] {
        let mut x = [0; BLOCK];
        for (k, &v) in self.blocks[blk].nodes.iter().enumerate() {
            x[k] = boundary[v];
        }
        x
    }

    /// Checks capacities, conservation and block membership.
    pub fn is_feasible(&self, flow: &[i64]) -> bool {
        if flow.len() != self.edges.len() {
            return false;
        }
        if self.edges.iter().zip(flow).any(|(e, &f)| f < 0 || f > e.cap) {
            return false;
        }
        let b = self.boundary(flow);
        for v in 0..self.n {
            if v != self.source && v != self.sink && self.block_of[v].is_none() && b[v] != 0 {
                return false;
            }
        }
        (0..self.blocks.len()).all(|i| self.blocks[i].func.in_base(&self.block_vector(i, &b)))
    }

    fn arcs(&self) -> Vec<Vec<(usize, Arc)>> {
        let mut out = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push((e.to, Arc::Forward(i)));
            out[e.to].push((e.from, Arc::Backward(i)));
        }
        for (bi, blk) in self.blocks.iter().enumerate() {
            for u in 0..BLOCK {
                for v in 0..BLOCK {
                    if u != v {
                        out[blk.nodes[u]].push((blk.nodes[v], Arc::Exchange(bi, u, v)));
                    }
                }
            }
        }
        for list in &mut out {
            list.sort_by_key(|&(to, _)| to);
        }
        out
    }

    fn residual(&self, arc: Arc, flow: &[i64], boundary: &[i64]) -> i64 {
        match arc {
            Arc::Forward(e) => {
                let cap = self.edges[e].cap;
                if cap >= INF {
                    INF
                } else {
                    cap - flow[e]
                }
            }
            Arc::Backward(e) => flow[e],
            Arc::Exchange(bi, u, v) => self.blocks[bi].func.kappa(&self.block_vector(bi, boundary), u, v),
        }
    }

    /// BFS over the residual network; returns predecessor arcs.
    fn search(&self, arcs: &[Vec<(usize, Arc)>], flow: &[i64], boundary: &[i64]) -> Vec<Option<(usize, Arc)>> {
        let mut pred: Vec<Option<(usize, Arc)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            if u == self.sink {
                break;
            }
            for &(w, arc) in &arcs[u] {
                if !seen[w] && self.residual(arc, flow, boundary) > 0 {
                    seen[w] = true;
                    pred[w] = Some((u, arc));
                    queue.push_back(w);
                }
            }
        }
        pred
    }

    fn apply(&self, path: &[Arc], alpha: i64, flow: &mut [i64]) {
        for &arc in path {
            match arc {
                Arc::Forward(e) => flow[e] += alpha,
                Arc::Backward(e) => flow[e] -= alpha,
                Arc::Exchange(..) => {}
            }
        }
    }

    /// Nodes reachable from the source in the residual network of `flow`.
    pub fn residual_reachable(&self, flow: &[i64]) -> Vec<bool> {
        let arcs = self.arcs();
        let boundary = self.boundary(flow);
        self.search_all(&arcs, flow, &boundary)
    }

    fn search_all(&self, arcs: &[Vec<(usize, Arc)>], flow: &[i64], boundary: &[i64]) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &(w, arc) in &arcs[u] {
                if !seen[w] && self.residual(arc, flow, boundary) > 0 {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Shortest augmenting paths until none is left.
    pub fn max_subflow(&self) -> Result<SubflowResult, SubflowError> {
        let arcs = self.arcs();
        let mut flow = vec![0i64; self.edges.len()];
        let mut augmentations = 0;
        loop {
            let boundary = self.boundary(&flow);
            let pred = self.search(&arcs, &flow, &boundary);
            if pred[self.sink].is_none() {
                let min_cut = self.search_all(&arcs, &flow, &boundary);
                let value = boundary[self.sink];
                return Ok(SubflowResult { flow, value, min_cut, augmentations });
            }
            let mut path = Vec::new();
            let mut v = self.sink;
            while let Some((u, arc)) = pred[v] {
                path.push(arc);
                v = u;
            }
            path.reverse();
            let mut alpha = path.iter().map(|&a| self.residual(a, &flow, &boundary)).min().unwrap();
            if alpha >= INF {
                return Err(SubflowError::Unbounded);
            }
            loop {
                let mut trial = flow.clone();
                self.apply(&path, alpha, &mut trial);
                let b = self.boundary(&trial);
                let ok = path.iter().all(|a| match *a {
                    Arc::Exchange(bi, ..) => self.blocks[bi].func.in_base(&self.block_vector(bi, &b)),
                    _ => true,
                });
                if ok {
                    flow = trial;
                    break;
                }
                if alpha == 1 {
                    return Err(SubflowError::ExchangeConflict);
                }
                alpha /= 2;
            }
            augmentations += 1;
        }
    }

    /// Edge list with flows, one edge per line.
    pub fn dump(&self, flow: &[i64]) -> String {
        let mut out = String::new();
        for (e, f) in self.edges.iter().zip(flow) {
            let cap = if e.cap >= INF { "inf".to_string() } else { e.cap.to_string() };
            writeln!(out, "{} -> {} cap {} flow {}", e.from, e.to, cap, f).unwrap();
        }
        for blk in &self.blocks {
            writeln!(out, "block {:?} b {}", blk.nodes, blk.func.b).unwrap();
        }
        out
    }
}

/// True when the cut, apart from the source, never holds both members of a
/// signed pair. `bar[v]` is the partner of node `v`.
pub fn verify_min_cut_transversal(side: &[bool], source: usize, bar: &[usize]) -> bool {
    (0..side.len()).all(|v| v == source || !side[v] || !side[bar[v]] || bar[v] == source)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut_set(res: &SubflowResult) -> Vec<usize> {
        (0..res.min_cut.len()).filter(|&v| res.min_cut[v]).collect()
    }

    #[test]
    fn single_edge() {
        let mut net = SubflowNetwork::new(2, 0, 1);
        net.add_edge(0, 1, 5);
        let res = net.max_subflow().unwrap();
        assert_eq!(res.value, 5);
        assert_eq!(cut_set(&res), vec![0]);
        assert_eq!(net.cut_capacity(&res.min_cut), Ok(Some(5)));
    }

    #[test]
    fn empty_network() {
        let net = SubflowNetwork::new(2, 0, 1);
        let res = net.max_subflow().unwrap();
        assert_eq!(res.value, 0);
        assert_eq!(cut_set(&res), vec![0]);
    }

    #[test]
    fn block_limits_throughput() {
        // nodes: 0 = s, 1 = t, 2..8 = block elements 1+,2+,3+,1-,2-,3-
        let mut net = SubflowNetwork::new(8, 0, 1);
        net.add_edge(0, 2, 2);
        net.add_edge(0, 3, 2);
        net.add_edge(5, 1, 2);
        net.add_edge(6, 1, 2);
        net.add_block([2, 3, 4, 5, 6, 7], 1).unwrap();
        let res = net.max_subflow().unwrap();
        assert!(net.is_feasible(&res.flow));
        assert_eq!(net.cut_capacity(&res.min_cut), Ok(Some(res.value)));
        // boundary (a, b, 0, -c, -d, 0) with a + b = c + d; {1+, 2+} caps a + b at 2
        assert_eq!(res.value, 2);
    }

    #[test]
    fn cut_capacity_cases() {
        let mut net = SubflowNetwork::new(8, 0, 1);
        net.add_block([2, 3, 4, 5, 6, 7], 1).unwrap();
        let mut side = vec![false; 8];
        side[0] = true;
        assert_eq!(net.cut_capacity(&side), Ok(Some(0)));
        side[2] = true;
        side[3] = true;
        assert_eq!(net.cut_capacity(&side), Ok(Some(2)));
        for v in 2..8 {
            side[v] = true;
        }
        assert_eq!(net.cut_capacity(&side), Ok(Some(0)));
        side[1] = true;
        assert_eq!(net.cut_capacity(&side), Err(SubflowError::CutShape));
    }

    #[test]
    fn unbounded_path() {
        let mut net = SubflowNetwork::new(3, 0, 1);
        net.add_edge(0, 2, INF);
        net.add_edge(2, 1, INF);
        assert_eq!(net.max_subflow().unwrap_err(), SubflowError::Unbounded);
    }

    #[test]
    fn transversality_check() {
        let bar = vec![1, 0, 3, 2];
        assert!(verify_min_cut_transversal(&[true, false, false, false], 0, &bar));
        assert!(!verify_min_cut_transversal(&[true, false, true, true], 0, &bar));
        assert!(verify_min_cut_transversal(&[true, false, true, false], 0, &bar));
    }

    #[test]
    fn dump_lists_edges() {
        let mut net = SubflowNetwork::new(3, 0, 1);
        net.add_edge(0, 2, 3);
        net.add_edge(2, 1, INF);
        let text = net.dump(&[1, 1]);
        assert_eq!(text, "0 -> 2 cap 3 flow 1\n2 -> 1 cap inf flow 1\n");
    }
}
