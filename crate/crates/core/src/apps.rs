//! Rounding a half-integral dual into a node multiway cut.

use std::collections::VecDeque;

use crate::instance::MultiflowInstance;
use crate::tree_space::Potential;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CutError {
    #[error("terminals {0} and {1} stay connected")]
    InfeasibleDual(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiwayCut {
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    pub capacity: i64,
}

/// Nonterminals with radius at least one half.
pub fn round_cut(instance: &MultiflowInstance, pot: &Potential) -> Result<MultiwayCut, CutError> {
    let nodes: Vec<usize> = instance.nonterminals().filter(|&v| pot.point(v).r4 >= 2).collect();
    let capacity = nodes.iter().map(|&v| instance.capacity(v)).sum();
    if let Some((s, t)) = connected_pair(instance, &nodes) {
        return Err(CutError::InfeasibleDual(instance.name(s).into(), instance.name(t).into()));
    }
    Ok(MultiwayCut { nodes, capacity })
}

/// First pair of terminals still joined after deleting `removed`.
fn connected_pair(instance: &MultiflowInstance, removed: &[usize]) -> Option<(usize, usize)> {
    let n = instance.num_nodes();
    let mut gone = vec![false; n];
    for &v in removed {
        gone[v] = true;
    }
    for &s in instance.terminals() {
        if gone[s] {
            continue;
        }
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in instance.incident(u) {
                let (a, b) = instance.edge(e);
                let w = if a == u { b } else { a };
                if gone[w] || seen[w] {
                    continue;
                }
                if instance.is_terminal(w) {
                    return Some((s, w));
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Whether deleting `removed` separates every pair of terminals.
pub fn verify_cut(instance: &MultiflowInstance, removed: &[usize]) -> bool {
    connected_pair(instance, removed).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::star_embedding;
    use crate::tree_space::TreePoint;

    fn path() -> MultiflowInstance {
        MultiflowInstance::new(
            vec!["s".into(), "a".into(), "b".into(), "t".into()],
            vec![(0, 1), (1, 2), (2, 3)],
            vec![0, 3],
            vec![0, 2, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn verify_on_a_path() {
        let inst = path();
        assert!(!verify_cut(&inst, &[]));
        assert!(verify_cut(&inst, &[1]));
        assert!(verify_cut(&inst, &[1, 2]));
    }

    #[test]
    fn rounding_picks_half_radii() {
        let inst = path();
        let emb = star_embedding(&inst);
        let mut pot = Potential::uniform(&inst, &emb, TreePoint::vertex(0), 0);
        assert!(round_cut(&inst, &pot).is_err());
        pot.points[2].r4 = 2;
        let cut = round_cut(&inst, &pot).unwrap();
        assert_eq!(cut, MultiwayCut { nodes: vec![2], capacity: 1 });
    }
}
