//! Dual potentials: one lattice point per network node.

use crate::instance::{MultiflowInstance, TreeEmbedding};

use super::lattice::{is_grid_point, LatticePoint};
use super::tree::{TreePoint, EDGE};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PotentialError {
    #[error("node {0} has a radius/position parity mismatch")]
    Parity(usize),
    #[error("node {0} has a negative radius")]
    Negative(usize),
    #[error("edge {0} violates its cost bound")]
    Infeasible(usize),
    #[error("terminal {0} is not pinned to its anchor")]
    Unpinned(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Potential {
    pub points: Vec<LatticePoint>,
}

impl Potential {
    /// Nonterminals at `(p, r4)`, terminals at their anchors with radius 0.
    pub fn uniform(instance: &MultiflowInstance, emb: &TreeEmbedding, p: TreePoint, r4: i64) -> Self {
        let points = (0..instance.num_nodes())
            .map(|v| match instance.terminal_index(v) {
                Some(t) => LatticePoint::new(TreePoint::vertex(emb.anchor(t)), 0),
                None => LatticePoint::new(p, r4),
            })
            .collect();
        Potential { points }
    }

    pub fn point(&self, v: usize) -> LatticePoint {
        self.points[v]
    }

    /// `4a(e) - (d - r_i - r_j)` in quarter units; negative means infeasible.
    pub fn slack4(&self, instance: &MultiflowInstance, emb: &TreeEmbedding, e: usize) -> i64 {
        let (i, j) = instance.edge(e);
        let (x, y) = (self.points[i], self.points[j]);
        EDGE * instance.cost(e) - (emb.tree.dist(x.p, y.p) - x.r4 - y.r4)
    }

    pub fn check(&self, instance: &MultiflowInstance, emb: &TreeEmbedding) -> Result<(), PotentialError> {
        for (v, x) in self.points.iter().enumerate() {
            if x.r4 < 0 {
                return Err(PotentialError::Negative(v));
            }
            if !is_grid_point(x) {
                return Err(PotentialError::Parity(v));
            }
            if let Some(t) = instance.terminal_index(v) {
                if *x != LatticePoint::new(TreePoint::vertex(emb.anchor(t)), 0) {
                    return Err(PotentialError::Unpinned(v));
                }
            }
        }
        for e in 0..instance.num_edges() {
            if self.slack4(instance, emb, e) < 0 {
                return Err(PotentialError::Infeasible(e));
            }
        }
        Ok(())
    }

    /// `sum 2 c(i) r(i)` ignoring feasibility.
    pub fn weight(&self, instance: &MultiflowInstance) -> i64 {
        instance.nonterminals().map(|v| instance.capacity(v) * self.points[v].r4 / 2).sum()
    }

    /// The dual objective, or `None` when this is not a valid potential.
    pub fn objective(&self, instance: &MultiflowInstance, emb: &TreeEmbedding) -> Option<i64> {
        self.check(instance, emb).ok().map(|_| self.weight(instance))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::star_embedding;

    fn path() -> MultiflowInstance {
        MultiflowInstance::new(
            vec!["a".into(), "b".into(), "s".into(), "t".into()],
            vec![(2, 0), (0, 1), (1, 3)],
            vec![2, 3],
            vec![2, 3, 0, 0],
        )
        .unwrap()
    }

    #[test]
    fn zero_radius_at_center_is_infeasible() {
        let inst = path();
        let emb = star_embedding(&inst);
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 0);
        assert_eq!(pot.check(&inst, &emb), Err(PotentialError::Infeasible(0)));
        assert_eq!(pot.objective(&inst, &emb), None);
    }

    #[test]
    fn unit_radius_at_center_is_feasible() {
        let inst = path();
        let emb = star_embedding(&inst);
        let pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        assert_eq!(pot.objective(&inst, &emb), Some(2 * 2 + 2 * 3));
    }

    #[test]
    fn parity_and_pinning() {
        let inst = path();
        let emb = star_embedding(&inst);
        let mut pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 2);
        assert_eq!(pot.check(&inst, &emb), Err(PotentialError::Parity(0)));
        pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 4);
        pot.points[2].r4 = 4;
        assert_eq!(pot.check(&inst, &emb), Err(PotentialError::Unpinned(2)));
    }
}
