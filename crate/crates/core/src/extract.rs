//! Path decomposition of an admissible support and the optimality certificate.

use crate::cover::AdmissibleSupport;
use crate::instance::{MultiflowInstance, TreeEmbedding};
use crate::tree_space::Potential;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("support is inconsistent at node {0}")]
    SupportInconsistent(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// A terminal-to-terminal path carrying `lambda2 / 2` units.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FlowPath {
    pub nodes: Vec<usize>,
    pub lambda2: i64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HalfIntegralMultiflow {
    pub paths: Vec<FlowPath>,
}

impl HalfIntegralMultiflow {
    /// Total doubled path weight.
    pub fn value2(&self) -> i64 {
        self.paths.iter().map(|p| p.lambda2).sum()
    }

    /// Sorts paths and merges copies of the same node sequence.
    pub fn normalize(&mut self) {
        self.paths.sort();
        let mut out: Vec<FlowPath> = Vec::with_capacity(self.paths.len());
        for p in self.paths.drain(..) {
            match out.last_mut() {
                Some(last) if last.nodes == p.nodes => last.lambda2 += p.lambda2,
                _ => out.push(p),
            }
        }
        self.paths = out;
    }

    /// Checks path shape and node capacities.
    pub fn check(&self, instance: &MultiflowInstance) -> Result<(), ExtractError> {
        let bad = |msg: String| Err(ExtractError::InvalidPath(msg));
        for (idx, p) in self.paths.iter().enumerate() {
            let n = p.nodes.len();
            if p.lambda2 <= 0 || n < 2 {
                return bad(format!("path {idx} is empty or carries no flow"));
            }
            let (s, t) = (p.nodes[0], p.nodes[n - 1]);
            if !instance.is_terminal(s) || !instance.is_terminal(t) || s == t {
                return bad(format!("path {idx} does not join distinct terminals"));
            }
            let inner = &p.nodes[1..n - 1];
            if inner.iter().any(|&v| instance.is_terminal(v)) {
                return bad(format!("path {idx} passes through a terminal"));
            }
            let mut seen = inner.to_vec();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != inner.len() {
                return bad(format!("path {idx} repeats a node"));
            }
            if p.nodes.windows(2).any(|w| instance.edge_between(w[0], w[1]).is_none()) {
                return bad(format!("path {idx} uses a missing edge"));
            }
        }
        let through = self.node_flow2(instance);
        for v in instance.nonterminals() {
            if through[v] > 2 * instance.capacity(v) {
                return bad(format!("capacity exceeded at node {v}"));
            }
        }
        Ok(())
    }

    /// Doubled flow through each node; terminals get their doubled endpoint flow.
    pub fn node_flow2(&self, instance: &MultiflowInstance) -> Vec<i64> {
        let mut out = vec![0; instance.num_nodes()];
        for p in &self.paths {
            for &v in &p.nodes {
                out[v] += p.lambda2;
            }
        }
        out
    }

    /// Doubled flow on each edge; steps along missing edges are ignored.
    pub fn edge_flow2(&self, instance: &MultiflowInstance) -> Vec<i64> {
        let mut out = vec![0; instance.num_edges()];
        for p in &self.paths {
            for w in p.nodes.windows(2) {
                if let Some(e) = instance.edge_between(w[0], w[1]) {
                    out[e] += p.lambda2;
                }
            }
        }
        out
    }
}

/// Greedy decomposition of a support into terminal paths that follow tree
/// geodesics. Terminals are scanned in order and edges by index.
pub fn algorithm1(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    pot: &Potential,
    support: &AdmissibleSupport,
) -> Result<HalfIntegralMultiflow, ExtractError> {
    let tree = &emb.tree;
    let n = instance.num_nodes();
    let mut z = support.z2.clone();
    let mut dir = vec![[0usize; 2]; instance.num_edges()];
    let mut sums = vec![[0i64; 3]; n];
    for e in 0..instance.num_edges() {
        if z[e] == 0 {
            continue;
        }
        let (i, j) = instance.edge(e);
        let (pi, pj) = (pot.point(i).p, pot.point(j).p);
        for (side, (v, from, to)) in [(i, pi, pj), (j, pj, pi)].into_iter().enumerate() {
            if !instance.is_terminal(v) {
                dir[e][side] = tree.direction(from, to);
                sums[v][dir[e][side]] += z[e];
            }
        }
    }
    let dir_at = |e: usize, v: usize| dir[e][usize::from(instance.edge(e).0 != v)];
    let other = |e: usize, v: usize| {
        let (i, j) = instance.edge(e);
        if i == v {
            j
        } else {
            i
        }
    };
    let mut flow = HalfIntegralMultiflow::default();
    loop {
        let start = instance
            .terminals()
            .iter()
            .find_map(|&s| instance.incident(s).iter().find(|&&e| z[e] > 0).map(|&e| (s, e)));
        let Some((s, first)) = start else { break };
        let mut nodes = vec![s];
        let mut used = vec![first];
        let mut mu = z[first];
        let (mut prev, mut e) = (s, first);
        loop {
            let cur = other(e, prev);
            nodes.push(cur);
            if instance.is_terminal(cur) {
                break;
            }
            if nodes.len() > n {
                return Err(ExtractError::SupportInconsistent(cur));
            }
            let k = dir_at(e, cur);
            let pick = |want: usize| {
                instance.incident(cur).iter().copied().find(|&f| f != e && z[f] > 0 && dir_at(f, cur) == want)
            };
            let next = if tree.star_degree(pot.point(cur).p) == 2 {
                pick(1 - k).map(|f| (f, i64::MAX))
            } else {
                (0..3).filter(|&kk| kk != k).find_map(|kk| {
                    let rest = 3 - k - kk;
                    let room = sums[cur][k] + sums[cur][kk] - sums[cur][rest];
                    if room >= 2 {
                        pick(kk).map(|f| (f, room / 2))
                    } else {
                        None
                    }
                })
            };
            let (f, cap) = next.ok_or(ExtractError::SupportInconsistent(cur))?;
            mu = mu.min(z[f]).min(cap);
            used.push(f);
            prev = cur;
            e = f;
        }
        for &f in &used {
            z[f] -= mu;
            let (i, j) = instance.edge(f);
            for (side, v) in [i, j].into_iter().enumerate() {
                if !instance.is_terminal(v) {
                    sums[v][dir[f][side]] -= mu;
                }
            }
        }
        flow.paths.push(FlowPath { nodes, lambda2: mu });
    }
    if let Some(e) = z.iter().position(|&x| x != 0) {
        return Err(ExtractError::SupportInconsistent(instance.edge(e).0));
    }
    flow.normalize();
    Ok(flow)
}

/// Complementary slackness and the duality gap, all scaled by 8 so that
/// every quantity is an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub flow_valid: bool,
    pub potential_valid: bool,
    /// Every path is a geodesic between its terminals' anchors.
    pub o1: bool,
    /// Every edge with flow is tight.
    pub o2: bool,
    /// Every node with positive radius is saturated.
    pub o3: bool,
    pub value8: i64,
    pub dual8: i64,
    pub gap8: i64,
}

impl CertificateReport {
    pub fn is_optimal(&self) -> bool {
        self.flow_valid && self.potential_valid && self.o1 && self.o2 && self.o3 && self.gap8 == 0
    }
}

pub fn certify(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    pot: &Potential,
    flow: &HalfIntegralMultiflow,
) -> CertificateReport {
    let tree = &emb.tree;
    let flow_valid = flow.check(instance).is_ok();
    let potential_valid = pot.check(instance, emb).is_ok();
    let node2 = flow.node_flow2(instance);
    let edge2 = flow.edge_flow2(instance);
    let anchor_dist = |p: &FlowPath| {
        let (s, t) = (p.nodes[0], p.nodes[p.nodes.len() - 1]);
        match (instance.terminal_index(s), instance.terminal_index(t)) {
            (Some(a), Some(b)) => tree.vertex_dist(emb.anchor(a), emb.anchor(b)),
            _ => 0,
        }
    };
    let hop = |u: usize, v: usize| tree.dist(pot.point(u).p, pot.point(v).p);

    let mut o1 = true;
    let mut path_term = 0;
    let mut value8 = 0;
    for p in &flow.paths {
        let along: i64 = p.nodes.windows(2).map(|w| hop(w[0], w[1])).sum();
        let dq = anchor_dist(p);
        o1 &= along == dq;
        path_term += p.lambda2 * (along - dq);
        value8 += p.lambda2 * dq;
    }
    let mut o2 = true;
    let mut edge_term = 0;
    for e in 0..instance.num_edges() {
        let slack = pot.slack4(instance, emb, e);
        o2 &= edge2[e] == 0 || slack == 0;
        edge_term += edge2[e] * slack;
        value8 -= 4 * instance.cost(e) * edge2[e];
    }
    let mut o3 = true;
    let mut node_term = 0;
    let mut dual8 = 0;
    for v in instance.nonterminals() {
        let (c, r4) = (instance.capacity(v), pot.point(v).r4);
        o3 &= r4 == 0 || node2[v] == 2 * c;
        node_term += 2 * (2 * c - node2[v]) * r4;
        dual8 += 4 * c * r4;
    }
    let gap8 = node_term + edge_term + path_term;
    debug_assert!(!flow_valid || gap8 == dual8 - value8);
    CertificateReport { flow_valid, potential_valid, o1, o2, o3, value8, dual8, gap8 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::star_embedding;
    use crate::tree_space::{LatticePoint, TreePoint};

    fn k13() -> MultiflowInstance {
        MultiflowInstance::new(
            vec!["m".into(), "a".into(), "b".into(), "c".into()],
            vec![(0, 1), (0, 2), (0, 3)],
            vec![1, 2, 3],
            vec![1, 0, 0, 0],
        )
        .unwrap()
    }

    #[test]
    fn star_certificate_for_one_path() {
        let inst = k13();
        let emb = star_embedding(&inst);
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        let flow = HalfIntegralMultiflow { paths: vec![FlowPath { nodes: vec![1, 0, 2], lambda2: 2 }] };
        let rep = certify(&inst, &emb, &pot, &flow);
        assert!(rep.is_optimal(), "{rep:?}");
        assert_eq!(rep.dual8, 16);
        assert_eq!(rep.value8, 16);
    }

    #[test]
    fn certificate_flags_gaps() {
        let inst = k13();
        let emb = star_embedding(&inst);
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        let rep = certify(&inst, &emb, &pot, &HalfIntegralMultiflow::default());
        assert!(!rep.o3);
        assert_eq!(rep.gap8, 16);
        let over = HalfIntegralMultiflow { paths: vec![FlowPath { nodes: vec![1, 0, 2], lambda2: 4 }] };
        assert!(!certify(&inst, &emb, &pot, &over).flow_valid);
    }

    #[test]
    fn three_half_paths_around_a_center() {
        let inst = k13();
        let emb = star_embedding(&inst);
        let mut pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        let support = AdmissibleSupport { z2: vec![1, 1, 1] };
        // odd throughput cannot be split into paths
        assert!(algorithm1(&inst, &emb, &pot, &support).is_err());
        let support = AdmissibleSupport { z2: vec![2, 2, 0] };
        let flow = algorithm1(&inst, &emb, &pot, &support).unwrap();
        assert_eq!(flow.paths, vec![FlowPath { nodes: vec![1, 0, 2], lambda2: 2 }]);
        pot.points[0] = LatticePoint::new(TreePoint::vertex(0), 4);
        assert!(certify(&inst, &emb, &pot, &flow).is_optimal());
    }

    #[test]
    fn normalize_merges_duplicates() {
        let mut f = HalfIntegralMultiflow {
            paths: vec![
                FlowPath { nodes: vec![2, 0, 1], lambda2: 1 },
                FlowPath { nodes: vec![1, 0, 2], lambda2: 1 },
                FlowPath { nodes: vec![1, 0, 2], lambda2: 1 },
            ],
        };
        f.normalize();
        assert_eq!(f.paths.len(), 2);
        assert_eq!(f.value2(), 3);
    }
}
