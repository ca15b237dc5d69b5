//! The skew-symmetric double covering network of a potential, its
//! source/sink form, and the translation of cuts back into potential moves.
//!
//! Every network node `i` owns a group of signed copies. Terminals get
//! `s+, s-`; flat nonterminals (position not a degree-3 vertex) get one pair
//! per side; singular nonterminals get one pair per side plus a hub pair
//! when the radius is positive. Zero-radius singular groups carry a block
//! constraint instead of internal edges.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bisubmodular::{SignedBlock, BLOCK};
use crate::instance::{MultiflowInstance, TreeEmbedding};
use crate::subflow::{SubflowError, SubflowNetwork, SubflowResult, INF};
use crate::tree_space::{color, is_grid_point, Color, LatticePoint, Potential, TreePoint};

/// Super source.
pub const SOURCE: usize = 0;
/// Super sink.
pub const SINK: usize = 1;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("edge {0} violates its cost bound")]
    InfeasiblePotential(usize),
    #[error("node {0} sits at a tree vertex of degree {1}")]
    Degenerate(usize, usize),
    #[error("edge {0} has a cost that is odd or not positive")]
    BadCost(usize),
    #[error("terminals {0} and {1} are adjacent")]
    TerminalEdge(usize, usize),
    #[error("minimum cut is not trivial")]
    NotOptimalYet,
    #[error("cut could not be normalized")]
    NormalizationFailed,
    #[error("cut pattern at node {0} matches no move")]
    Pattern(usize),
    #[error("cut has infinite capacity")]
    InfiniteCut,
    #[error(transparent)]
    Subflow(#[from] SubflowError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Terminal,
    Flat,
    PositiveSingular,
    ZeroSingular,
}

/// Copies of one network node. `plus[k]`/`minus[k]` face the `k`-th
/// component around the node's tree position.
#[derive(Debug, Clone)]
pub struct Group {
    pub kind: NodeKind,
    pub positive: bool,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub hub: Option<(usize, usize)>,
}

impl Group {
    /// Plus side including the hub.
    pub fn upper(&self) -> Vec<usize> {
        let mut v = self.plus.clone();
        v.extend(self.hub.map(|h| h.0));
        v.sort_unstable();
        v
    }

    /// Minus side including the hub.
    pub fn lower(&self) -> Vec<usize> {
        let mut v = self.minus.clone();
        v.extend(self.hub.map(|h| h.1));
        v.sort_unstable();
        v
    }

    pub fn all(&self) -> Vec<usize> {
        let mut v = self.upper();
        v.extend(self.lower());
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRole {
    TerminalLoop,
    Internal,
    /// `a+ -> to`, standing in for a fixed edge `from -> to`.
    SplitSource { from: usize, to: usize },
    /// `from -> a-`, the other half of the same fixed edge.
    SplitSink { from: usize, to: usize },
    TightPlus(usize),
    TightMinus(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightEdge {
    pub edge: usize,
    /// Component index at each endpoint; `None` at terminals.
    pub dir: [Option<usize>; 2],
    pub plus_arc: usize,
    pub minus_arc: usize,
}

#[derive(Debug, Clone)]
pub struct DoubleCover {
    pub net: SubflowNetwork,
    pub groups: Vec<Group>,
    pub roles: Vec<EdgeRole>,
    pub tight: Vec<TightEdge>,
    /// Zero singular groups as `(nodes, capacity)`.
    pub blocks: Vec<([usize; BLOCK], i64)>,
    /// Signed partner of every node; the super source and sink are partners.
    pub bar: Vec<usize>,
    /// Network node owning each copy.
    pub owner: Vec<Option<usize>>,
}

/// Edges with zero slack, each with its component indices.
pub fn tight_edges(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    pot: &Potential,
) -> Result<Vec<(usize, [Option<usize>; 2])>, CoverError> {
    let tree = &emb.tree;
    let mut out = Vec::new();
    for e in 0..instance.num_edges() {
        let slack = pot.slack4(instance, emb, e);
        if slack < 0 {
            return Err(CoverError::InfeasiblePotential(e));
        }
        if slack == 0 {
            let (i, j) = instance.edge(e);
            let (pi, pj) = (pot.point(i).p, pot.point(j).p);
            let di = (!instance.is_terminal(i)).then(|| tree.direction(pi, pj));
            let dj = (!instance.is_terminal(j)).then(|| tree.direction(pj, pi));
            out.push((e, [di, dj]));
        }
    }
    Ok(out)
}

struct Builder {
    net_edges: Vec<(usize, usize, i64, EdgeRole)>,
    next: usize,
    bar: Vec<usize>,
    owner: Vec<Option<usize>>,
}

impl Builder {
    fn pair(&mut self, owner: usize) -> (usize, usize) {
        let (p, m) = (self.next, self.next + 1);
        self.next += 2;
        self.bar.extend([m, p]);
        self.owner.extend([Some(owner), Some(owner)]);
        (p, m)
    }

    fn edge(&mut self, from: usize, to: usize, cap: i64, role: EdgeRole) -> usize {
        self.net_edges.push((from, to, cap, role));
        self.net_edges.len() - 1
    }

    /// A fixed-throughput edge, split through the super terminals.
    fn fixed(&mut self, from: usize, to: usize, cap: i64) {
        if cap > 0 {
            self.edge(from, SINK, cap, EdgeRole::SplitSink { from, to });
            self.edge(SOURCE, to, cap, EdgeRole::SplitSource { from, to });
        }
    }
}

/// Whether a tree position makes a node singular; errors on positions the
/// construction cannot handle.
fn star_degree(emb: &TreeEmbedding, node: usize, p: TreePoint) -> Result<usize, CoverError> {
    let deg = emb.tree.star_degree(p);
    if !(2..=3).contains(&deg) {
        return Err(CoverError::Degenerate(node, deg));
    }
    Ok(deg)
}

pub fn build_cover(instance: &MultiflowInstance, emb: &TreeEmbedding, pot: &Potential) -> Result<DoubleCover, CoverError> {
    for e in 0..instance.num_edges() {
        let a = instance.cost(e);
        if a <= 0 || a % 2 != 0 {
            return Err(CoverError::BadCost(e));
        }
        let (i, j) = instance.edge(e);
        if instance.is_terminal(i) && instance.is_terminal(j) {
            return Err(CoverError::TerminalEdge(i, j));
        }
    }
    let tight = tight_edges(instance, emb, pot)?;
    let mut b = Builder { net_edges: Vec::new(), next: 2, bar: vec![SINK, SOURCE], owner: vec![None, None] };
    let mut groups = Vec::with_capacity(instance.num_nodes());
    let mut blocks = Vec::new();
    for v in 0..instance.num_nodes() {
        let x = pot.point(v);
        if instance.is_terminal(v) {
            let (p, m) = b.pair(v);
            b.edge(p, m, INF, EdgeRole::TerminalLoop);
            groups.push(Group { kind: NodeKind::Terminal, positive: false, plus: vec![p], minus: vec![m], hub: None });
            continue;
        }
        let c = instance.capacity(v);
        let deg = star_degree(emb, v, x.p)?;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for _ in 0..deg {
            let (p, m) = b.pair(v);
            plus.push(p);
            minus.push(m);
        }
        let group = if deg == 2 {
            for (from, to) in [(plus[0], minus[1]), (plus[1], minus[0])] {
                if x.r4 > 0 {
                    b.fixed(from, to, c);
                } else {
                    b.edge(from, to, c, EdgeRole::Internal);
                }
            }
            Group { kind: NodeKind::Flat, positive: x.r4 > 0, plus, minus, hub: None }
        } else if x.r4 > 0 {
            let (h0p, h0m) = b.pair(v);
            for k in 0..3 {
                b.edge(plus[k], h0p, c, EdgeRole::Internal);
                b.edge(h0m, minus[k], c, EdgeRole::Internal);
            }
            b.fixed(h0p, h0m, 2 * c);
            Group { kind: NodeKind::PositiveSingular, positive: true, plus, minus, hub: Some((h0p, h0m)) }
        } else {
            blocks.push(([plus[0], plus[1], plus[2], minus[0], minus[1], minus[2]], c));
            Group { kind: NodeKind::ZeroSingular, positive: false, plus, minus, hub: None }
        };
        groups.push(group);
    }
    let mut tight_out = Vec::with_capacity(tight.len());
    for (e, dir) in tight {
        let (i, j) = instance.edge(e);
        let end = |node: usize, d: Option<usize>| {
            let g = &groups[node];
            let k = d.unwrap_or(0);
            (g.plus[k], g.minus[k])
        };
        let (ip, im) = end(i, dir[0]);
        let (jp, jm) = end(j, dir[1]);
        let plus_arc = b.edge(im, jp, INF, EdgeRole::TightPlus(e));
        let minus_arc = b.edge(jm, ip, INF, EdgeRole::TightMinus(e));
        tight_out.push(TightEdge { edge: e, dir, plus_arc, minus_arc });
    }
    let mut net = SubflowNetwork::new(b.next, SOURCE, SINK);
    let mut roles = Vec::with_capacity(b.net_edges.len());
    for &(from, to, cap, role) in &b.net_edges {
        net.add_edge(from, to, cap);
        roles.push(role);
    }
    for &(nodes, c) in &blocks {
        net.add_block(nodes, c)?;
    }
    Ok(DoubleCover { net, groups, roles, tight: tight_out, blocks, bar: b.bar, owner: b.owner })
}

/// An edge of the network before the source/sink split, with its flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CirculationArc {
    pub from: usize,
    pub to: usize,
    pub lower: i64,
    pub upper: i64,
    pub value: i64,
}

#[derive(Debug, Clone)]
pub struct Circulation {
    pub arcs: Vec<CirculationArc>,
    /// Flow on each tight edge's plus and minus arc, aligned with `DoubleCover::tight`.
    pub tight_values: Vec<(i64, i64)>,
}

/// Doubled support on instance edges; zero off the tight set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSupport {
    pub z2: Vec<i64>,
}

impl DoubleCover {
    pub fn num_nodes(&self) -> usize {
        self.net.num_nodes()
    }

    /// Every edge `u -> v` has a partner `bar v -> bar u` of equal capacity.
    pub fn is_skew_symmetric(&self) -> bool {
        let mut count: BTreeMap<(usize, usize, i64), usize> = BTreeMap::new();
        for e in self.net.edges() {
            *count.entry((e.from, e.to, e.cap)).or_default() += 1;
        }
        count.iter().all(|(&(from, to, cap), &n)| count.get(&(self.bar[to], self.bar[from], cap)) == Some(&n))
    }

    pub fn solve(&self) -> Result<SubflowResult, CoverError> {
        Ok(self.net.max_subflow()?)
    }

    pub fn source_capacity(&self) -> i64 {
        self.net.edges().iter().filter(|e| e.from == SOURCE).map(|e| e.cap).sum()
    }

    /// Recovers a circulation from a flow saturating every source edge.
    pub fn procedure_a(&self, res: &SubflowResult) -> Result<Circulation, CoverError> {
        if res.value != self.source_capacity() {
            return Err(CoverError::NotOptimalYet);
        }
        let mut arcs = Vec::new();
        for (idx, (e, role)) in self.net.edges().iter().zip(&self.roles).enumerate() {
            let f = res.flow[idx];
            match *role {
                EdgeRole::SplitSink { .. } => {}
                EdgeRole::SplitSource { from, to } => {
                    arcs.push(CirculationArc { from, to, lower: e.cap, upper: e.cap, value: f })
                }
                _ => arcs.push(CirculationArc { from: e.from, to: e.to, lower: 0, upper: e.cap, value: f }),
            }
        }
        let tight_values = self.tight.iter().map(|t| (res.flow[t.plus_arc], res.flow[t.minus_arc])).collect();
        Ok(Circulation { arcs, tight_values })
    }

    /// Bounds, conservation at usual nodes, and block membership.
    pub fn is_circulation(&self, circ: &Circulation) -> bool {
        let mut boundary = vec![0i64; self.num_nodes()];
        for a in &circ.arcs {
            if a.value < a.lower || a.value > a.upper {
                return false;
            }
            boundary[a.from] -= a.value;
            boundary[a.to] += a.value;
        }
        let mut unusual = vec![false; self.num_nodes()];
        for (nodes, c) in &self.blocks {
            let mut x = [0; BLOCK];
            for (k, &v) in nodes.iter().enumerate() {
                x[k] = boundary[v];
                unusual[v] = true;
            }
            if !SignedBlock::new(*c).in_base(&x) {
                return false;
            }
        }
        (2..self.num_nodes()).all(|v| unusual[v] || boundary[v] == 0)
    }

    pub fn support_zeta(&self, instance: &MultiflowInstance, circ: &Circulation) -> AdmissibleSupport {
        let mut z2 = vec![0; instance.num_edges()];
        for (t, &(fp, fm)) in self.tight.iter().zip(&circ.tight_values) {
            z2[t.edge] = fp + fm;
        }
        AdmissibleSupport { z2 }
    }

    /// Completes a minimal minimum cut into a normal one.
    pub fn procedure_b(&self, cut: &[bool]) -> Result<Vec<bool>, CoverError> {
        let mut out = cut.to_vec();
        for g in &self.groups {
            if matches!(g.kind, NodeKind::PositiveSingular | NodeKind::ZeroSingular) {
                let upper = g.upper();
                if upper.iter().filter(|&&v| out[v]).count() >= 2 {
                    for v in upper {
                        out[v] = true;
                    }
                }
            }
        }
        let before = self.net.cut_capacity(cut)?;
        let after = self.net.cut_capacity(&out)?;
        if before != after || !self.is_normal(&out) {
            return Err(CoverError::NormalizationFailed);
        }
        Ok(out)
    }

    fn members(&self, cut: &[bool], nodes: &[usize]) -> Vec<usize> {
        nodes.iter().copied().filter(|&v| cut[v]).collect()
    }

    /// Checks the four normal-cut conditions.
    pub fn is_normal(&self, cut: &[bool]) -> bool {
        if !cut[SOURCE] || cut[SINK] {
            return false;
        }
        for v in 2..self.num_nodes() {
            if cut[v] && cut[self.bar[v]] {
                return false;
            }
        }
        for g in &self.groups {
            let ok = match g.kind {
                NodeKind::Terminal => g.all().iter().all(|&v| !cut[v]),
                _ if g.positive => {
                    let up = self.members(cut, &g.upper());
                    let down = self.members(cut, &g.lower());
                    let up_ok = up.is_empty() || up == g.upper() || g.plus.iter().any(|&p| up == [p]);
                    let down_ok = down.is_empty()
                        || down == g.lower()
                        || g.minus.iter().any(|&m| down == without(&g.lower(), m));
                    up_ok && down_ok
                }
                _ => {
                    let inside = self.members(cut, &g.all());
                    inside.is_empty()
                        || inside == g.upper()
                        || (0..g.plus.len()).any(|k| {
                            let single = vec![g.plus[k]];
                            let mut mixed = without(&g.lower(), g.minus[k]);
                            mixed.push(g.plus[k]);
                            mixed.sort_unstable();
                            inside == single || inside == mixed
                        })
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// Copies on the side that moves along the order's upward neighborhoods.
    pub fn side_masks(&self, emb: &TreeEmbedding, pot: &Potential) -> (Vec<bool>, Vec<bool>) {
        let n = self.num_nodes();
        let (mut uf, mut ui) = (vec![false; n], vec![false; n]);
        for (v, g) in self.groups.iter().enumerate() {
            if g.kind == NodeKind::Terminal {
                continue;
            }
            let x = pot.point(v);
            match color(&emb.tree, &x) {
                Color::Black => g.all().iter().for_each(|&u| uf[u] = true),
                Color::White => g.all().iter().for_each(|&u| ui[u] = true),
                Color::None => {
                    for k in 0..g.plus.len() {
                        let below = LatticePoint::new(emb.tree.star_neighbor(x.p, k), x.r4 - 2);
                        let side = if color(&emb.tree, &below) == Color::Black { &mut uf } else { &mut ui };
                        side[g.plus[k]] = true;
                        side[g.minus[k]] = true;
                    }
                }
            }
        }
        (uf, ui)
    }

    /// Splits a normal cut into its two sides, each keeping the super source.
    pub fn split_fi(&self, emb: &TreeEmbedding, pot: &Potential, cut: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let (uf, ui) = self.side_masks(emb, pot);
        let pick = |mask: &[bool]| {
            let mut out: Vec<bool> = cut.iter().zip(mask).map(|(&c, &m)| c && m).collect();
            out[SOURCE] = true;
            out
        };
        (pick(&uf), pick(&ui))
    }

    /// Change of the dual objective caused by moving along `cut`.
    pub fn g_delta(&self, cut: &[bool]) -> Result<i64, CoverError> {
        let mut base = vec![false; self.num_nodes()];
        base[SOURCE] = true;
        let here = self.net.cut_capacity(cut)?.ok_or(CoverError::InfiniteCut)?;
        let start = self.net.cut_capacity(&base)?.expect("source edges are finite");
        Ok(here - start)
    }

    /// The potential obtained by moving every node according to its cut pattern.
    pub fn apply_cut(
        &self,
        instance: &MultiflowInstance,
        emb: &TreeEmbedding,
        pot: &Potential,
        cut: &[bool],
    ) -> Result<Potential, CoverError> {
        let tree = &emb.tree;
        let mut points = pot.points.clone();
        for (v, g) in self.groups.iter().enumerate() {
            if instance.is_terminal(v) {
                continue;
            }
            let x = pot.point(v);
            let inside = self.members(cut, &g.all());
            let moved = if inside.is_empty() {
                Some(x)
            } else if inside == g.upper() {
                Some(LatticePoint::new(x.p, x.r4 + 4))
            } else if inside == g.lower() {
                Some(LatticePoint::new(x.p, x.r4 - 4))
            } else {
                (0..g.plus.len()).find_map(|k| {
                    let rest = without(&g.lower(), g.minus[k]);
                    let mut mixed = rest.clone();
                    mixed.push(g.plus[k]);
                    mixed.sort_unstable();
                    if inside == [g.plus[k]] {
                        Some(LatticePoint::new(tree.star_neighbor(x.p, k), x.r4 + 2))
                    } else if inside == rest {
                        Some(LatticePoint::new(tree.star_neighbor(x.p, k), x.r4 - 2))
                    } else if inside == mixed {
                        x.p.as_vertex()
                            .map(|u| LatticePoint::new(TreePoint::vertex(tree.vertex_neighbor(u, k)), x.r4))
                    } else {
                        None
                    }
                })
            };
            match moved {
                Some(y) if y.r4 >= 0 && is_grid_point(&y) => points[v] = y,
                _ => return Err(CoverError::Pattern(v)),
            }
        }
        Ok(Potential { points })
    }

    pub fn to_debug_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|g| json!({"kind": format!("{:?}", g.kind), "plus": g.plus, "minus": g.minus, "hub": g.hub}))
            .collect();
        let edges: Vec<Value> = self
            .net
            .edges()
            .iter()
            .map(|e| json!([e.from, e.to, if e.cap >= INF { Value::Null } else { json!(e.cap) }]))
            .collect();
        let blocks: Vec<Value> = self.net.block_nodes().map(|b| json!(b)).collect();
        json!({"groups": groups, "edges": edges, "blocks": blocks})
    }
}

fn without(nodes: &[usize], v: usize) -> Vec<usize> {
    nodes.iter().copied().filter(|&u| u != v).collect()
}

/// Independent check of the support conditions at every nonterminal.
pub fn check_support(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    pot: &Potential,
    support: &AdmissibleSupport,
) -> Result<(), String> {
    let tree = &emb.tree;
    let mut sums = vec![[0i64; 3]; instance.num_nodes()];
    for e in 0..instance.num_edges() {
        let z = support.z2[e];
        if z < 0 {
            return Err(format!("negative support on edge {e}"));
        }
        if z == 0 {
            continue;
        }
        if pot.slack4(instance, emb, e) != 0 {
            return Err(format!("support on slack edge {e}"));
        }
        let (i, j) = instance.edge(e);
        let (pi, pj) = (pot.point(i).p, pot.point(j).p);
        sums[i][tree.direction(pi, pj)] += z;
        sums[j][tree.direction(pj, pi)] += z;
    }
    for v in instance.nonterminals() {
        let c2 = 2 * instance.capacity(v);
        let [z1, z2, z3] = sums[v];
        let total = z1 + z2 + z3;
        let x = pot.point(v);
        if tree.star_degree(x.p) == 3 {
            if total > 2 * c2 || z1 > z2 + z3 || z2 > z1 + z3 || z3 > z1 + z2 {
                return Err(format!("branching bound fails at node {v}"));
            }
        } else if z1 != z2 || z1 > c2 {
            return Err(format!("balance fails at node {v}"));
        }
        if x.r4 > 0 && total != 2 * c2 {
            return Err(format!("positive node {v} is not saturated"));
        }
        if total % 2 != 0 {
            return Err(format!("odd throughput at node {v}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::star_embedding;
    use crate::reduce::perturb;
    use crate::tree_space::TreeBuilder;

    fn k13() -> MultiflowInstance {
        MultiflowInstance::new(
            vec!["m".into(), "a".into(), "b".into(), "c".into()],
            vec![(0, 1), (0, 2), (0, 3)],
            vec![1, 2, 3],
            vec![1, 0, 0, 0],
        )
        .unwrap()
    }

    /// A long path with anchors at both ends, costs 2.
    fn line_instance() -> (MultiflowInstance, TreeEmbedding) {
        let inst = MultiflowInstance::new(
            vec!["s".into(), "x".into(), "t".into()],
            vec![(0, 1), (1, 2)],
            vec![0, 2],
            vec![0, 3, 0],
        )
        .unwrap()
        .with_uniform_cost(2);
        let mut b = TreeBuilder::new();
        let first = b.add_vertex("p0");
        let mut prev = first;
        for i in 1..=10 {
            let v = b.add_vertex(format!("p{i}"));
            b.add_edge(prev, v).unwrap();
            prev = v;
        }
        b.add_ray(first, 4, "left");
        b.add_ray(prev, 4, "right");
        (inst, TreeEmbedding { tree: b.build().unwrap(), anchors: vec![first, prev] })
    }

    #[test]
    fn slack_everywhere_gives_no_tight_edges() {
        let (inst, emb) = line_instance();
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(5), 40);
        assert!(tight_edges(&inst, &emb, &pot).unwrap().is_empty());
        let cover = build_cover(&inst, &emb, &pot).unwrap();
        // two terminal pairs + two pairs for the flat node
        assert_eq!(cover.num_nodes(), 2 + 4 + 4);
        assert!(cover.is_skew_symmetric());
    }

    #[test]
    fn tight_edges_match_direct_evaluation() {
        let (inst, emb) = line_instance();
        // d(p0, p5) = 20 quarters; tight when r4 = 20 - 8 = 12
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(5), 12);
        let tight = tight_edges(&inst, &emb, &pot).unwrap();
        assert_eq!(tight.len(), 2);
        for (e, _) in tight {
            let (i, j) = inst.edge(e);
            let d = emb.tree.dist(pot.point(i).p, pot.point(j).p);
            assert_eq!(d - pot.point(i).r4 - pot.point(j).r4, 4 * inst.cost(e));
        }
        let low = Potential::uniform(&inst, &emb, TreePoint::vertex(5), 8);
        assert_eq!(tight_edges(&inst, &emb, &low), Err(CoverError::InfeasiblePotential(0)));
    }

    #[test]
    fn positive_singular_gadget() {
        let inst = k13();
        let (pert, emb) = perturb(&inst);
        let center = emb.embedding.tree.neighbors(0).len();
        assert_eq!(center, 3);
        let pot = Potential::uniform(&pert, &emb.embedding, TreePoint::vertex(0), 4 * emb.diameter_units);
        let cover = build_cover(&pert, &emb.embedding, &pot).unwrap();
        assert_eq!(cover.groups[0].kind, NodeKind::PositiveSingular);
        assert_eq!(cover.groups[0].all().len(), 8);
        let (h0p, h0m) = cover.groups[0].hub.unwrap();
        let fixed: Vec<_> = cover.net.edges().iter().filter(|e| e.from == SOURCE || e.to == SINK).collect();
        assert_eq!(fixed.len(), 2);
        assert!(fixed.iter().any(|e| e.from == h0p && e.to == SINK && e.cap == 2));
        assert!(fixed.iter().any(|e| e.from == SOURCE && e.to == h0m && e.cap == 2));
        assert!(cover.is_skew_symmetric());
    }

    #[test]
    fn empty_cut_keeps_potential() {
        let (inst, emb) = line_instance();
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(5), 12);
        let cover = build_cover(&inst, &emb, &pot).unwrap();
        let mut cut = vec![false; cover.num_nodes()];
        cut[SOURCE] = true;
        assert_eq!(cover.apply_cut(&inst, &emb, &pot, &cut).unwrap(), pot);
        assert_eq!(cover.g_delta(&cut), Ok(0));
        assert_eq!(cover.procedure_b(&cut).unwrap(), cut);
    }

    #[test]
    fn raising_a_flat_node() {
        let (inst, emb) = line_instance();
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(5), 12);
        let cover = build_cover(&inst, &emb, &pot).unwrap();
        let mut cut = vec![false; cover.num_nodes()];
        cut[SOURCE] = true;
        for v in cover.groups[1].upper() {
            cut[v] = true;
        }
        let moved = cover.apply_cut(&inst, &emb, &pot, &cut).unwrap();
        assert_eq!(moved.point(1).r4, 16);
        let delta = moved.weight(&inst) - pot.weight(&inst);
        assert_eq!(delta, 2 * inst.capacity(1));
        assert_eq!(cover.g_delta(&cut), Ok(delta));
    }

    #[test]
    fn star_cover_on_original_costs_is_rejected() {
        let inst = k13();
        let emb = star_embedding(&inst);
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        assert_eq!(build_cover(&inst, &emb, &pot).unwrap_err(), CoverError::BadCost(0));
    }
}
