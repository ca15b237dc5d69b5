//! Steepest descent on the dual objective over the radius-augmented tree
//! lattice, ending with a half-integral primal solution.

use crate::cover::{build_cover, check_support, AdmissibleSupport, CoverError, SOURCE};
use crate::extract::{algorithm1, ExtractError, HalfIntegralMultiflow};
use crate::instance::{MultiflowInstance, TreeEmbedding};
use crate::tree_space::{Potential, TreePoint, VertexId, EDGE};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DescentError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("inconsistent step: {0}")]
    Inconsistent(String),
    #[error("no optimum after {0} steps")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DescentStats {
    pub iterations: usize,
    /// Objective before each step and at the end.
    pub g_trace: Vec<i64>,
    pub augmentations: usize,
}

#[derive(Debug, Clone)]
pub struct DescentOutcome {
    pub potential: Potential,
    pub support: AdmissibleSupport,
    pub multiflow: HalfIntegralMultiflow,
    pub stats: DescentStats,
}

/// Vertices on some path between two anchors.
fn hull(emb: &TreeEmbedding) -> Vec<VertexId> {
    let tree = &emb.tree;
    (0..tree.num_vertices())
        .filter(|&v| {
            emb.anchors.iter().any(|&a| {
                emb.anchors.iter().any(|&b| tree.vertex_dist(a, v) + tree.vertex_dist(v, b) == tree.vertex_dist(a, b))
            })
        })
        .collect()
}

/// Largest anchor distance, in quarter units.
pub fn hull_diameter(emb: &TreeEmbedding) -> i64 {
    let tree = &emb.tree;
    let mut best = 0;
    for &a in &emb.anchors {
        for &b in &emb.anchors {
            best = best.max(tree.vertex_dist(a, b));
        }
    }
    best
}

/// Hull vertex with the smallest largest distance to an anchor; lowest id on ties.
pub fn hull_center(emb: &TreeEmbedding) -> VertexId {
    let ecc = |v: VertexId| emb.anchors.iter().map(|&a| emb.tree.vertex_dist(a, v)).max().unwrap_or(0);
    hull(emb).into_iter().min_by_key(|&v| (ecc(v), v)).expect("anchors lie in the hull")
}

/// Every nonterminal at the hull center with radius equal to the hull diameter.
pub fn initial_potential(instance: &MultiflowInstance, emb: &TreeEmbedding) -> Potential {
    let r4 = hull_diameter(emb);
    debug_assert_eq!(r4 % EDGE, 0);
    Potential::uniform(instance, emb, TreePoint::vertex(hull_center(emb)), r4)
}

pub fn g_value(instance: &MultiflowInstance, emb: &TreeEmbedding, pot: &Potential) -> Option<i64> {
    pot.objective(instance, emb)
}

pub fn solve(instance: &MultiflowInstance, emb: &TreeEmbedding) -> Result<DescentOutcome, DescentError> {
    descend(instance, emb, initial_potential(instance, emb))
}

/// Runs the descent from `start`, which must be a feasible potential.
pub fn descend(instance: &MultiflowInstance, emb: &TreeEmbedding, start: Potential) -> Result<DescentOutcome, DescentError> {
    let limit = 4 * (hull_diameter(emb) / EDGE) as usize + 16;
    let mut pot = start;
    let mut g = g_value(instance, emb, &pot).ok_or_else(|| DescentError::Inconsistent("start is infeasible".into()))?;
    let mut stats = DescentStats { g_trace: vec![g], ..Default::default() };
    loop {
        let cover = build_cover(instance, emb, &pot)?;
        let res = cover.solve()?;
        stats.augmentations += res.augmentations;
        let cut = cover.procedure_b(&res.min_cut)?;
        if cut.iter().enumerate().all(|(v, &inside)| inside == (v == SOURCE)) {
            let circ = cover.procedure_a(&res)?;
            if !cover.is_circulation(&circ) {
                return Err(DescentError::Inconsistent("recovered circulation is infeasible".into()));
            }
            let support = cover.support_zeta(instance, &circ);
            check_support(instance, emb, &pot, &support).map_err(DescentError::Inconsistent)?;
            let multiflow = algorithm1(instance, emb, &pot, &support)?;
            return Ok(DescentOutcome { potential: pot, support, multiflow, stats });
        }
        if stats.iterations >= limit {
            return Err(DescentError::IterationLimit(stats.iterations));
        }
        let (xf, xi) = cover.split_fi(emb, &pot, &cut);
        let mut best: Option<(i64, Potential)> = None;
        for side in [&xf, &xi] {
            let next = cover.apply_cut(instance, emb, &pot, side)?;
            let Some(gn) = g_value(instance, emb, &next) else { continue };
            if gn - g != cover.g_delta(side)? {
                return Err(DescentError::Inconsistent("objective change differs from cut capacity".into()));
            }
            if best.as_ref().is_none_or(|(gb, _)| gn < *gb) {
                best = Some((gn, next));
            }
        }
        let (gn, next) = best.ok_or_else(|| DescentError::Inconsistent("both moves are infeasible".into()))?;
        if gn >= g {
            return Err(DescentError::Inconsistent(format!("objective did not decrease: {g} -> {gn}")));
        }
        pot = next;
        g = gn;
        stats.iterations += 1;
        stats.g_trace.push(g);
    }
}
