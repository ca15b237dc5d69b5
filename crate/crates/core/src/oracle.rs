//! Brute-force reference computations for tests. Everything here is
//! exponential and guarded by explicit size limits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bisubmodular::{delta_b, delta_star, in_d_delta, project_phi, SignedBlock, SignedSubset, BLOCK, FULL};
use crate::instance::{star_embedding, MultiflowInstance, TreeEmbedding};
use crate::subflow::{SubflowNetwork, INF};
use crate::tree_space::{is_grid_point, local_neighborhood, midpoint, round_pair, LatticePoint, Potential, TreePoint};

/// Largest search space the dual enumeration accepts.
pub const DUAL_ENUM_LIMIT: u64 = 1_000_000_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for exhaustive search")]
    TooLarge,
}

/// Nodes visited by a backtracking search before it gives up.
const SEARCH_BUDGET: u64 = 2_000_000;

/// Depth-first search for a potential with every nonterminal drawn from its
/// domain and total weight at most `bound`; keeps the lightest one found.
/// Domains must be sorted by radius.
struct Search<'a> {
    instance: &'a MultiflowInstance,
    emb: &'a TreeEmbedding,
    order: Vec<usize>,
    domains: Vec<Vec<LatticePoint>>,
    /// Smallest possible weight of the nodes from each depth on.
    rest: Vec<i64>,
    assigned: Vec<bool>,
    points: Vec<LatticePoint>,
    best: Option<(i64, Vec<LatticePoint>)>,
    bound: i64,
    visited: u64,
    first_only: bool,
}

impl<'a> Search<'a> {
    fn new(
        instance: &'a MultiflowInstance,
        emb: &'a TreeEmbedding,
        domains: Vec<Vec<LatticePoint>>,
        bound: i64,
        first_only: bool,
    ) -> Self {
        let n = instance.num_nodes();
        let mut points = vec![LatticePoint::new(TreePoint::vertex(0), 0); n];
        let mut assigned = vec![false; n];
        for &t in instance.terminals() {
            let idx = instance.terminal_index(t).unwrap();
            points[t] = LatticePoint::new(TreePoint::vertex(emb.anchor(idx)), 0);
            assigned[t] = true;
        }
        let mut search = Search {
            instance,
            emb,
            order: Vec::new(),
            domains,
            rest: Vec::new(),
            assigned,
            points,
            best: None,
            bound,
            visited: 0,
            first_only,
        };
        // Drop candidates that clash with a terminal neighbour.
        for v in instance.nonterminals() {
            let dom = std::mem::take(&mut search.domains[v]);
            search.domains[v] = dom.into_iter().filter(|&x| search.compatible(v, x)).collect();
        }
        let mut order: Vec<usize> = instance.nonterminals().collect();
        order.sort_by_key(|&v| (search.domains[v].len(), v));
        let mut rest = vec![0; order.len() + 1];
        for d in (0..order.len()).rev() {
            let v = order[d];
            let low = search.domains[v].first().map_or(i64::MAX / 4, |x| instance.capacity(v) * x.r4 / 2);
            rest[d] = rest[d + 1] + low;
        }
        search.order = order;
        search.rest = rest;
        search
    }

    /// Whether `x` at `v` respects every edge to an assigned node.
    fn compatible(&self, v: usize, x: LatticePoint) -> bool {
        self.instance.incident(v).iter().all(|&e| {
            let (i, j) = self.instance.edge(e);
            let w = if i == v { j } else { i };
            if !self.assigned[w] {
                return true;
            }
            let y = self.points[w];
            self.emb.tree.dist(x.p, y.p) - x.r4 - y.r4 <= 4 * self.instance.cost(e)
        })
    }

    /// Every unassigned neighbour of `v` still has a compatible candidate.
    fn forward_ok(&self, v: usize) -> bool {
        self.instance.incident(v).iter().all(|&e| {
            let (i, j) = self.instance.edge(e);
            let w = if i == v { j } else { i };
            self.assigned[w] || self.domains[w].iter().any(|&y| self.compatible(w, y))
        })
    }

    fn run(&mut self, depth: usize, weight: i64) -> Result<(), OracleError> {
        self.visited += 1;
        if self.visited > SEARCH_BUDGET {
            return Err(OracleError::TooLarge);
        }
        if depth == self.order.len() {
            if self.best.as_ref().is_none_or(|(w, _)| weight < *w) {
                self.best = Some((weight, self.points.clone()));
                self.bound = weight - i64::from(!self.first_only);
            }
            return Ok(());
        }
        let v = self.order[depth];
        let c = self.instance.capacity(v);
        for idx in 0..self.domains[v].len() {
            let x = self.domains[v][idx];
            let w = weight + c * x.r4 / 2;
            if w + self.rest[depth + 1] > self.bound {
                break;
            }
            if !self.compatible(v, x) {
                continue;
            }
            self.points[v] = x;
            self.assigned[v] = true;
            if self.forward_ok(v) {
                self.run(depth + 1, w)?;
            }
            self.assigned[v] = false;
            if self.first_only && self.best.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Exact minimum of the dual objective on the star embedding, with every
/// nonterminal at the center, a leaf, or an edge midpoint and radius at most 1.
pub fn dual_enum(instance: &MultiflowInstance) -> Result<(i64, Potential), OracleError> {
    let emb = star_embedding(instance);
    let k = instance.terminals().len() as u64;
    let free = instance.nonterminals().count() as u32;
    let per_node = (2 * k + 1) * 5;
    match per_node.checked_pow(free) {
        Some(size) if size <= DUAL_ENUM_LIMIT => {}
        _ => return Err(OracleError::TooLarge),
    }
    let mut candidates = Vec::new();
    for v in 0..emb.tree.num_vertices() {
        for r4 in [0, 4, 8] {
            candidates.push(LatticePoint::new(TreePoint::vertex(v), r4));
        }
        if v > 0 {
            for r4 in [2, 6] {
                candidates.push(LatticePoint::new(TreePoint::on_edge(0, v, 2), r4));
            }
        }
    }
    candidates.sort_by_key(|x| (x.r4, x.p));
    let domains = (0..instance.num_nodes()).map(|_| candidates.clone()).collect();
    // Radius 1 at the center is always feasible.
    let start = Potential::uniform(instance, &emb, TreePoint::vertex(0), 4);
    let mut search = Search::new(instance, &emb, domains, start.weight(instance), false);
    search.run(0, 0)?;
    Ok(match search.best {
        Some((w, points)) => (w, Potential { points }),
        None => (start.weight(instance), start),
    })
}

/// Maximum value of an integral flow, by enumeration.
pub fn flow_enum(net: &SubflowNetwork) -> Result<i64, OracleError> {
    let edges = net.edges();
    if edges.len() > 10 || edges.iter().any(|e| e.cap > 3 && e.cap < INF) {
        return Err(OracleError::TooLarge);
    }
    let caps: Vec<i64> = edges.iter().map(|e| e.cap.min(3)).collect();
    let mut flow = vec![0i64; edges.len()];
    let mut best = 0;
    loop {
        if net.is_feasible(&flow) {
            best = best.max(net.boundary(&flow)[net.sink()]);
        }
        let mut i = 0;
        loop {
            if i == flow.len() {
                return Ok(best);
            }
            if flow[i] < caps[i] {
                flow[i] += 1;
                break;
            }
            flow[i] = 0;
            i += 1;
        }
    }
}

/// Counts violations of submodularity and of the two extension identities.
pub fn extension_violations(b: i64) -> usize {
    let mut bad = 0;
    for x in 0..64u8 {
        for y in 0..64u8 {
            let lhs = delta_star(b, SignedSubset(x)) + delta_star(b, SignedSubset(y));
            let rhs = delta_star(b, SignedSubset(x & y)) + delta_star(b, SignedSubset(x | y));
            bad += usize::from(lhs < rhs);
        }
    }
    for y in 0..8u8 {
        for z in (0..8u8).filter(|z| z & y == 0) {
            let lifted = delta_star(b, SignedSubset(y | z << 3));
            bad += usize::from(Ok(lifted) != delta_b(b, y, z));
        }
    }
    for x in 0..64u8 {
        let x = SignedSubset(x);
        let (over, under) = (delta_star(b, x.overline()), delta_star(b, x.underline()));
        bad += usize::from(over != under || under > delta_star(b, x));
    }
    bad
}

/// Counts failures of the projection between the base polyhedron and its
/// image: lifts of integer points of the image, and projections of all
/// integer base vectors in the box `[-2b, 2b]^6`.
pub fn projection_violations(b: i64) -> usize {
    let block = SignedBlock::new(b);
    let mut bad = 0;
    for z0 in 0..=2 * b {
        for z1 in 0..=2 * b {
            for z2 in 0..=2 * b {
                let z = [z0, z1, z2];
                if in_d_delta(b, z.map(|v| 2 * v)) {
                    let x = [z0, z1, z2, -z0, -z1, -z2];
                    bad += usize::from(!block.in_base(&x) || project_phi(&x) != z.map(|v| 2 * v));
                }
            }
        }
    }
    let side = (4 * b + 1) as usize;
    let mut x = [-2 * b; BLOCK];
    for _ in 0..side.pow(BLOCK as u32) {
        if block.in_base(&x) && !in_d_delta(b, project_phi(&x)) {
            bad += 1;
        }
        for v in x.iter_mut() {
            if *v < 2 * b {
                *v += 1;
                break;
            }
            *v = -2 * b;
        }
    }
    debug_assert_eq!(block.value(FULL), 0);
    bad
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbeReport {
    pub trials: usize,
    /// Pairs with both sides finite.
    pub finite_pairs: usize,
    pub violations: usize,
}

/// Raises radii until every edge bound holds.
fn repair(instance: &MultiflowInstance, emb: &TreeEmbedding, pot: &mut Potential) {
    loop {
        let Some(e) = (0..instance.num_edges()).find(|&e| pot.slack4(instance, emb, e) < 0) else { return };
        let (i, j) = instance.edge(e);
        let v = if instance.is_terminal(i) { j } else { i };
        pot.points[v].r4 += 4;
    }
}

/// Floor and ceiling of the coordinatewise midpoint.
pub fn round_midpoint(emb: &TreeEmbedding, x: &Potential, y: &Potential) -> (Potential, Potential) {
    let (lo, hi) = x
        .points
        .iter()
        .zip(&y.points)
        .map(|(a, b)| round_pair(&emb.tree, &midpoint(&emb.tree, a, b)))
        .unzip();
    (Potential { points: lo }, Potential { points: hi })
}

/// Samples pairs of potentials and checks discrete midpoint convexity of the
/// dual objective. Roughly half of the samples are repaired to feasibility.
pub fn convexity_probe(instance: &MultiflowInstance, emb: &TreeEmbedding, trials: usize, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = TreePoint::vertex(crate::descent::hull_center(emb));
    let reach = crate::descent::hull_diameter(emb) / 2 + 8;
    let spots = emb.tree.half_grid_ball(center, reach);
    let max_r4 = reach + 8;
    let sample = |rng: &mut ChaCha8Rng| {
        let mut pot = Potential::uniform(instance, emb, center, 0);
        for v in instance.nonterminals() {
            let p = spots[rng.gen_range(0..spots.len())];
            let mut r4 = 2 * rng.gen_range(0..=max_r4 / 2);
            if !is_grid_point(&LatticePoint::new(p, r4)) {
                r4 += 2;
            }
            pot.points[v] = LatticePoint::new(p, r4);
        }
        if rng.gen_bool(0.5) {
            repair(instance, emb, &mut pot);
        }
        pot
    };
    let mut report = ProbeReport { trials, ..Default::default() };
    for _ in 0..trials {
        let x = sample(&mut rng);
        let y = if rng.gen_bool(0.05) { x.clone() } else { sample(&mut rng) };
        let (Some(gx), Some(gy)) = (x.objective(instance, emb), y.objective(instance, emb)) else { continue };
        report.finite_pairs += 1;
        let (lo, hi) = round_midpoint(emb, &x, &y);
        match (lo.objective(instance, emb), hi.objective(instance, emb)) {
            (Some(gl), Some(gh)) if gx + gy >= gl + gh => {}
            _ => report.violations += 1,
        }
    }
    report
}

/// Minimum of the dual objective over the upward (or downward) neighborhood
/// of `pot`, or `None` if every point there is infeasible.
pub fn neighborhood_minimum(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    pot: &Potential,
    upward: bool,
) -> Result<Option<i64>, OracleError> {
    let mut domains = vec![Vec::new(); instance.num_nodes()];
    let mut size: u64 = 1;
    for v in instance.nonterminals() {
        let (up, down) = local_neighborhood(&emb.tree, &pot.point(v));
        let mut d = if upward { up } else { down };
        d.sort_by_key(|x| (x.r4, x.p));
        size = size.saturating_mul(d.len() as u64);
        domains[v] = d;
    }
    if size > SEARCH_BUDGET {
        return Err(OracleError::TooLarge);
    }
    let mut search = Search::new(instance, emb, domains, i64::MAX, false);
    search.run(0, 0)?;
    Ok(search.best.map(|(w, _)| w))
}

/// Grid points within `rho` quarters of `x` in the `dist + |radius gap|` metric.
fn box_around(emb: &TreeEmbedding, x: LatticePoint, rho: i64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for p in emb.tree.half_grid_ball(x.p, rho) {
        let slack = rho - emb.tree.dist(p, x.p);
        let mut r4 = (x.r4 - slack).max(0);
        while r4 <= x.r4 + slack {
            let y = LatticePoint::new(p, r4);
            if is_grid_point(&y) {
                out.push(y);
            }
            r4 += 2;
        }
    }
    out.sort_by_key(|y| (y.r4, y.p));
    out
}

/// Smallest `l_inf` distance, in quarter units, from `start` to a potential
/// of weight at most `target`, searching radii `min_rho, min_rho + 4, ...` up
/// to `max_rho`. A result equal to `min_rho` only says "at most `min_rho`".
pub fn distance_to_optimum(
    instance: &MultiflowInstance,
    emb: &TreeEmbedding,
    start: &Potential,
    target: i64,
    min_rho: i64,
    max_rho: i64,
) -> Result<Option<i64>, OracleError> {
    let mut rho = min_rho;
    while rho <= max_rho {
        let mut domains = vec![Vec::new(); instance.num_nodes()];
        for v in instance.nonterminals() {
            domains[v] = box_around(emb, start.point(v), rho);
        }
        let mut search = Search::new(instance, emb, domains, target, true);
        search.run(0, 0)?;
        if search.best.is_some() {
            return Ok(Some(rho));
        }
        rho += 4;
    }
    Ok(None)
}

/// Seed for sampling oracles, from `HALFFLOW_SEED` when set.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("HALFFLOW_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}
