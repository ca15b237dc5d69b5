//! Reduction of a zero-cost instance on a star to a positive-cost instance on
//! a bounded-degree tree, and the map carrying an optimal potential back.
//!
//! The tree is a balanced binary tree with one leaf per terminal and a long
//! ray glued at every leaf. Each ray is cut into bands of equal length; a
//! band that no tight edge jumps across separates the potential cleanly.

use crate::instance::{star_embedding, MultiflowInstance, TreeEmbedding};
use crate::tree_space::{LatticePoint, Potential, Tree, TreeBuilder, TreePoint, VertexId, EDGE};

/// Edge cost used by the reduced instance.
pub const PERTURBED_COST: i64 = 2;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("every band is crossed by some edge")]
    NoCleanBand,
    #[error("recovered potential is infeasible: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone)]
pub struct PerturbedEmbedding {
    pub embedding: TreeEmbedding,
    /// Leaf of the branching part carrying each terminal's ray.
    pub leaves: Vec<VertexId>,
    /// Diameter of the branching part, in edges.
    pub sigma_diameter: usize,
    /// Number of bands on each ray.
    pub bands: usize,
    /// Distance from a leaf to its anchor, in edges.
    pub anchor_depth: usize,
    /// Largest distance between two anchors, in edges.
    pub diameter_units: i64,
}

/// Recursively builds a subtree with `k` leaves hanging below `root`.
fn grow(b: &mut TreeBuilder, k: usize, leaves: &mut Vec<VertexId>) -> VertexId {
    let v = b.add_vertex(format!("sigma{}", leaves.len()));
    if k == 1 {
        leaves.push(v);
        return v;
    }
    let left = grow(b, k.div_ceil(2), leaves);
    let right = grow(b, k / 2, leaves);
    b.add_edge(v, left).expect("fresh vertex");
    b.add_edge(v, right).expect("fresh vertex");
    v
}

/// A tree with `k >= 2` leaves and all inner vertices of degree 3. Returns the
/// builder and the leaves in order. An inner vertex gets id 0 when `k >= 3`.
pub fn build_sigma(k: usize) -> (TreeBuilder, Vec<VertexId>) {
    assert!(k >= 2, "need at least two leaves");
    let mut b = TreeBuilder::new();
    let mut leaves = Vec::with_capacity(k);
    if k == 2 {
        for _ in 0..2 {
            let v = b.add_vertex(format!("sigma{}", leaves.len()));
            leaves.push(v);
        }
        b.add_edge(leaves[0], leaves[1]).expect("two leaves");
        return (b, leaves);
    }
    // The root would have degree 2; its two children are joined directly.
    let left = grow(&mut b, k.div_ceil(2), &mut leaves);
    let right = grow(&mut b, k / 2, &mut leaves);
    b.add_edge(left, right).expect("distinct subtrees");
    (b, leaves)
}

fn leaf_diameter(tree: &Tree, leaves: &[VertexId]) -> usize {
    let mut best = 0;
    for (i, &u) in leaves.iter().enumerate() {
        for &v in &leaves[i + 1..] {
            best = best.max(tree.vertex_dist(u, v) / EDGE);
        }
    }
    best as usize
}

/// The positive-cost instance and its embedding.
pub fn perturb(instance: &MultiflowInstance) -> (MultiflowInstance, PerturbedEmbedding) {
    let k = instance.terminals().len();
    let (b, leaves) = build_sigma(k);
    let sigma_diameter = {
        let probe = b_clone_build(&b);
        leaf_diameter(&probe, &leaves)
    };
    let bands = 2 * instance.num_edges() + 1;
    let anchor_depth = bands * sigma_diameter;
    let diameter_units = (2 * anchor_depth + sigma_diameter) as i64;
    let ray_len = anchor_depth + diameter_units as usize + 4;
    let mut b = b;
    for (s, &leaf) in leaves.iter().enumerate() {
        b.add_ray(leaf, ray_len, &format!("ray:{}", instance.name(instance.terminals()[s])));
    }
    let tree = b.build().expect("glued rays keep a tree");
    let anchors = (0..k).map(|s| tree.rays()[s].vertices[anchor_depth]).collect();
    let embedding = TreeEmbedding { tree, anchors };
    let pert = instance.with_uniform_cost(PERTURBED_COST);
    (pert, PerturbedEmbedding { embedding, leaves, sigma_diameter, bands, anchor_depth, diameter_units })
}

fn b_clone_build(b: &TreeBuilder) -> Tree {
    b.clone().build().expect("branching part is a tree")
}

impl PerturbedEmbedding {
    fn tree(&self) -> &Tree {
        &self.embedding.tree
    }

    /// Band index of a ray edge, if the edge lies in some band.
    fn band_of(&self, u: VertexId, v: VertexId) -> Option<(usize, usize)> {
        let (ray, d) = self.tree().ray_edge(u, v)?;
        let band = d / self.sigma_diameter;
        (band < self.bands).then_some((ray, band))
    }

    /// Whether the shortest path between the two balls of edge `e` uses an
    /// edge of band `band`.
    pub fn hit_test(&self, instance: &MultiflowInstance, pot: &Potential, e: usize, band: usize) -> bool {
        let tree = self.tree();
        let (i, j) = instance.edge(e);
        let (xi, xj) = (pot.point(i), pot.point(j));
        let gap = tree.dist(xi.p, xj.p) - xi.r4 - xj.r4;
        if gap <= 0 {
            return false;
        }
        let from = tree.step_toward(xi.p, xj.p, xi.r4);
        let to = tree.step_toward(xj.p, xi.p, xj.r4);
        let mut cur = from.as_vertex().expect("ball boundary is a vertex");
        let steps = tree.dist(from, to) / EDGE;
        for _ in 0..steps {
            let next = tree.step_toward(TreePoint::vertex(cur), to, EDGE).as_vertex().expect("vertex step");
            if self.band_of(cur, next).is_some_and(|(_, b)| b == band) {
                return true;
            }
            cur = next;
        }
        false
    }

    /// First band crossed by no edge.
    pub fn clean_band(&self, instance: &MultiflowInstance, pot: &Potential) -> Option<usize> {
        (0..self.bands).find(|&band| (0..instance.num_edges()).all(|e| !self.hit_test(instance, pot, e, band)))
    }

    /// The separating edge of ray `s` in band `band`, as `(near, far)` from the leaf.
    fn separator(&self, s: usize, band: usize) -> (VertexId, VertexId) {
        let ray = &self.tree().rays()[s];
        let far = (band + 1) * self.sigma_diameter;
        (ray.vertices[far - 1], ray.vertices[far])
    }

    /// Maps an optimal potential of the reduced instance to a potential on the
    /// star embedding of the original instance.
    pub fn recover(&self, instance: &MultiflowInstance, pot: &Potential) -> Result<(Potential, TreeEmbedding), ReduceError> {
        let tree = self.tree();
        let star = star_embedding(instance);
        let band = self.clean_band(instance, pot).ok_or(ReduceError::NoCleanBand)?;
        let k = instance.terminals().len();
        let seps: Vec<_> = (0..k).map(|s| self.separator(s, band)).collect();
        let beyond = ((band + 1) * self.sigma_diameter) as i64 * EDGE;
        let mut points = Vec::with_capacity(instance.num_nodes());
        for v in 0..instance.num_nodes() {
            if let Some(t) = instance.terminal_index(v) {
                points.push(LatticePoint::new(TreePoint::vertex(star.anchor(t)), 0));
                continue;
            }
            let x = pot.point(v);
            let inside = |w: VertexId| tree.dist(x.p, TreePoint::vertex(w)) <= x.r4;
            let hits: Vec<usize> = (0..k).filter(|&s| inside(seps[s].0) && inside(seps[s].1)).collect();
            let y = match hits.as_slice() {
                [] => match tree.ray_offset(x.p) {
                    Some((s, q)) if q >= beyond => LatticePoint::new(TreePoint::vertex(star.anchor(s)), 0),
                    _ => LatticePoint::new(TreePoint::vertex(0), 0),
                },
                [s] => LatticePoint::new(TreePoint::on_edge(0, star.anchor(*s), 2), 2),
                _ => LatticePoint::new(TreePoint::vertex(0), 4),
            };
            points.push(y);
        }
        let out = Potential { points };
        out.check(instance, &star).map_err(|e| ReduceError::Infeasible(e.to_string()))?;
        Ok((out, star))
    }
}
