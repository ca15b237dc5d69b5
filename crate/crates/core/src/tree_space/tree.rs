//! Finite trees with optional rays, addressed in quarter units.
//!
//! A [`TreePoint`] is a point of the second subdivision of the tree: either a
//! vertex, or a point on an edge at offset 1, 2 or 3 quarters from the
//! smaller endpoint. Offset 2 is the edge midpoint, i.e. the extra vertex of
//! the first subdivision.

use std::collections::VecDeque;
use std::fmt;

use serde_json::{json, Value};

pub type VertexId = usize;

/// Length of one tree edge in quarter units.
pub const EDGE: i64 = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    a: u32,
    b: u32,
    off: u8,
}

impl TreePoint {
    pub fn vertex(v: VertexId) -> Self {
        TreePoint { a: v as u32, b: v as u32, off: 0 }
    }

    /// The point `off` quarters from `u` on the edge `uv`. Offsets 0 and 4 are
    /// identified with the endpoints.
    pub fn on_edge(u: VertexId, v: VertexId, off: i64) -> Self {
        assert!((0..=EDGE).contains(&off), "edge offset {off} out of range");
        if off == 0 {
            return Self::vertex(u);
        }
        if off == EDGE {
            return Self::vertex(v);
        }
        if u < v {
            TreePoint { a: u as u32, b: v as u32, off: off as u8 }
        } else {
            TreePoint { a: v as u32, b: u as u32, off: (EDGE - off) as u8 }
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.off == 0
    }

    pub fn as_vertex(&self) -> Option<VertexId> {
        self.is_vertex().then_some(self.a as usize)
    }

    /// True for vertices and edge midpoints.
    pub fn is_half_grid(&self) -> bool {
        self.off.is_multiple_of(2)
    }

    pub fn is_midpoint(&self) -> bool {
        self.off == 2
    }

    /// Endpoints `(a, b)` with `a < b` and the offset from `a`. Vertices
    /// return `(v, v, 0)`.
    pub fn parts(&self) -> (VertexId, VertexId, i64) {
        (self.a as usize, self.b as usize, self.off as i64)
    }
}

impl fmt::Debug for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vertex() {
            write!(f, "v{}", self.a)
        } else {
            write!(f, "v{}-v{}@{}", self.a, self.b, self.off)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ray {
    /// `vertices[d]` lies `d` edges from the glue vertex; `vertices[0]` is the
    /// glue vertex itself.
    pub vertices: Vec<VertexId>,
}

impl Ray {
    pub fn glue(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no vertices")]
    Empty,
    #[error("edge {0}-{1} is a loop or duplicate")]
    BadEdge(VertexId, VertexId),
    #[error("graph is not a tree")]
    NotATree,
}

#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<String>,
    rays: Vec<Ray>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.adj.push(Vec::new());
        self.labels.push(label.into());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), TreeError> {
        if u == v || self.adj[u].contains(&v) {
            return Err(TreeError::BadEdge(u, v));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(())
    }

    /// Attaches a path of `len` new edges at `glue`.
    pub fn add_ray(&mut self, glue: VertexId, len: usize, label: &str) -> usize {
        let mut vertices = vec![glue];
        for d in 1..=len {
            let v = self.add_vertex(format!("{label}.{d}"));
            let prev = *vertices.last().unwrap();
            self.add_edge(prev, v).expect("fresh ray vertex");
            vertices.push(v);
        }
        self.rays.push(Ray { vertices });
        self.rays.len() - 1
    }

    pub fn build(mut self) -> Result<Tree, TreeError> {
        let n = self.adj.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let edges: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edges != n - 1 {
            return Err(TreeError::NotATree);
        }
        for list in &mut self.adj {
            list.sort_unstable();
        }
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0u32; n];
        let mut queue = VecDeque::from([0]);
        parent[0] = 0;
        let mut seen = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    seen += 1;
                    queue.push_back(v);
                }
            }
        }
        if seen != n {
            return Err(TreeError::NotATree);
        }
        let levels = (usize::BITS - n.leading_zeros()) as usize + 1;
        let mut jump = vec![parent.clone()];
        for j in 1..levels {
            let prev = &jump[j - 1];
            let next: Vec<VertexId> = (0..n).map(|v| prev[prev[v]]).collect();
            jump.push(next);
        }
        let mut ray_of = vec![None; n];
        for (idx, ray) in self.rays.iter().enumerate() {
            for (d, &v) in ray.vertices.iter().enumerate().skip(1) {
                ray_of[v] = Some((idx, d));
            }
        }
        Ok(Tree {
            adj: self.adj,
            labels: self.labels,
            rays: self.rays,
            ray_of,
            parent,
            depth,
            jump,
        })
    }
}

/// An immutable tree rooted at vertex 0.
#[derive(Debug, Clone)]
pub struct Tree {
    adj: Vec<Vec<VertexId>>,
    labels: Vec<String>,
    rays: Vec<Ray>,
    ray_of: Vec<Option<(usize, usize)>>,
    parent: Vec<VertexId>,
    depth: Vec<u32>,
    jump: Vec<Vec<VertexId>>,
}

impl Tree {
    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    /// `(ray index, edges from the glue vertex)` for vertices strictly inside a ray.
    pub fn ray_position(&self, v: VertexId) -> Option<(usize, usize)> {
        self.ray_of[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn ancestor(&self, mut v: VertexId, mut k: u32) -> VertexId {
        let mut j = 0;
        while k > 0 {
            if k & 1 == 1 {
                v = self.jump[j][v];
            }
            k >>= 1;
            j += 1;
        }
        v
    }

    pub fn lca(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        if self.depth[u] < self.depth[v] {
            std::mem::swap(&mut u, &mut v);
        }
        u = self.ancestor(u, self.depth[u] - self.depth[v]);
        if u == v {
            return u;
        }
        for j in (0..self.jump.len()).rev() {
            if self.jump[j][u] != self.jump[j][v] {
                u = self.jump[j][u];
                v = self.jump[j][v];
            }
        }
        self.parent[u]
    }

    /// Distance between vertices, in quarter units.
    pub fn vertex_dist(&self, u: VertexId, v: VertexId) -> i64 {
        let l = self.lca(u, v);
        EDGE * (self.depth[u] + self.depth[v] - 2 * self.depth[l]) as i64
    }

    fn dist_to_vertex(&self, p: TreePoint, v: VertexId) -> i64 {
        let (a, b, off) = p.parts();
        if off == 0 {
            self.vertex_dist(a, v)
        } else {
            (off + self.vertex_dist(a, v)).min(EDGE - off + self.vertex_dist(b, v))
        }
    }

    /// Tree distance in quarter units.
    pub fn dist(&self, p: TreePoint, q: TreePoint) -> i64 {
        let (qa, qb, qoff) = q.parts();
        if qoff == 0 {
            return self.dist_to_vertex(p, qa);
        }
        let (pa, pb, poff) = p.parts();
        if poff != 0 && pa == qa && pb == qb {
            return (poff - qoff).abs();
        }
        (qoff + self.dist_to_vertex(p, qa)).min(EDGE - qoff + self.dist_to_vertex(p, qb))
    }

    /// The `j`-th vertex on the vertex path from `u` to `t`.
    fn path_vertex(&self, u: VertexId, t: VertexId, j: i64) -> VertexId {
        let l = self.lca(u, t);
        let up = (self.depth[u] - self.depth[l]) as i64;
        let total = up + (self.depth[t] - self.depth[l]) as i64;
        if j <= up {
            self.ancestor(u, j as u32)
        } else {
            self.ancestor(t, (total - j) as u32)
        }
    }

    fn step_from_vertex(&self, v: VertexId, q: TreePoint, s: i64) -> TreePoint {
        let (qa, qb, qoff) = q.parts();
        // entry vertex of q's edge as seen from v, and q's offset from it
        let (n, other, into) = if qoff == 0 {
            (qa, qa, 0)
        } else if qoff + self.vertex_dist(v, qa) <= EDGE - qoff + self.vertex_dist(v, qb) {
            (qa, qb, qoff)
        } else {
            (qb, qa, EDGE - qoff)
        };
        let span = self.vertex_dist(v, n);
        if s <= span {
            let (j, rem) = (s / EDGE, s % EDGE);
            let w = self.path_vertex(v, n, j);
            if rem == 0 {
                return TreePoint::vertex(w);
            }
            let w2 = self.path_vertex(v, n, j + 1);
            return TreePoint::on_edge(w, w2, rem);
        }
        debug_assert!(s - span <= into);
        TreePoint::on_edge(n, other, s - span)
    }

    /// The point at distance `s` from `p` on the geodesic towards `q`.
    pub fn step_toward(&self, p: TreePoint, q: TreePoint, s: i64) -> TreePoint {
        let d = self.dist(p, q);
        assert!((0..=d).contains(&s), "step {s} beyond distance {d}");
        if s == 0 {
            return p;
        }
        if s == d {
            return q;
        }
        let (pa, pb, poff) = p.parts();
        if poff == 0 {
            return self.step_from_vertex(pa, q, s);
        }
        let (qa, qb, qoff) = q.parts();
        if qoff != 0 && pa == qa && pb == qb {
            let off = if qoff > poff { poff + s } else { poff - s };
            return TreePoint::on_edge(pa, pb, off);
        }
        if poff + self.dist_to_vertex(q, pa) == d {
            if s <= poff {
                TreePoint::on_edge(pa, pb, poff - s)
            } else {
                self.step_from_vertex(pa, q, s - poff)
            }
        } else if s <= EDGE - poff {
            TreePoint::on_edge(pa, pb, poff + s)
        } else {
            self.step_from_vertex(pb, q, s - (EDGE - poff))
        }
    }

    /// Number of neighbours of `p` in the first subdivision.
    pub fn star_degree(&self, p: TreePoint) -> usize {
        match p.as_vertex() {
            Some(v) => self.degree(v),
            None => 2,
        }
    }

    /// The `k`-th neighbour (0-based) of `p` in the first subdivision: for a
    /// vertex the midpoint towards its `k`-th tree neighbour, for a midpoint
    /// the smaller (`k = 0`) or larger (`k = 1`) endpoint.
    pub fn star_neighbor(&self, p: TreePoint, k: usize) -> TreePoint {
        let (a, b, off) = p.parts();
        match off {
            0 => TreePoint::on_edge(a, self.adj[a][k], 2),
            2 => TreePoint::vertex(if k == 0 { a } else { b }),
            _ => panic!("{p:?} is not on the half grid"),
        }
    }

    /// The `k`-th tree neighbour of vertex `v`.
    pub fn vertex_neighbor(&self, v: VertexId, k: usize) -> VertexId {
        self.adj[v][k]
    }

    /// Index of the component of `tree - p` (first subdivision) that contains `q`.
    pub fn direction(&self, p: TreePoint, q: TreePoint) -> usize {
        let d = self.dist(p, q);
        assert!(d > 0, "direction to the point itself");
        let next = self.step_toward(p, q, d.min(1));
        let (na, nb, noff) = next.parts();
        let (pa, pb, poff) = p.parts();
        if poff == 0 {
            let w = if na == pa { nb } else { na };
            debug_assert!(noff != 0);
            self.adj[pa].binary_search(&w).expect("neighbour")
        } else {
            debug_assert!(na == pa && nb == pb);
            if noff < poff {
                0
            } else {
                1
            }
        }
    }

    /// All first-subdivision points within `radius` quarters of `center`.
    pub fn half_grid_ball(&self, center: TreePoint, radius: i64) -> Vec<TreePoint> {
        let mut out = Vec::new();
        for v in 0..self.num_vertices() {
            let pv = TreePoint::vertex(v);
            if self.dist(center, pv) <= radius {
                out.push(pv);
            }
            for &w in &self.adj[v] {
                if v < w {
                    let m = TreePoint::on_edge(v, w, 2);
                    if self.dist(center, m) <= radius {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// `(ray, quarters from the glue vertex)` for points on a ray, including
    /// the ray's first edge.
    pub fn ray_offset(&self, p: TreePoint) -> Option<(usize, i64)> {
        let (a, b, off) = p.parts();
        let on_ray = |v: VertexId, ray: usize| match self.ray_of[v] {
            Some((r, d)) if r == ray => Some(d),
            _ if self.rays[ray].glue() == v => Some(0),
            _ => None,
        };
        let ray = self.ray_of[a].or(self.ray_of[b]).map(|(r, _)| r)?;
        let (da, db) = (on_ray(a, ray)?, on_ray(b, ray)?);
        Some((ray, EDGE * da.min(db) as i64 + if db >= da { off } else { EDGE - off }))
    }

    /// `(ray, edges from the glue vertex to the nearer endpoint)` for a tree edge on a ray.
    pub fn ray_edge(&self, u: VertexId, v: VertexId) -> Option<(usize, usize)> {
        let (ray, q) = self.ray_offset(TreePoint::on_edge(u.min(v), u.max(v), 2))?;
        Some((ray, (q / EDGE) as usize))
    }

    pub fn point_json(&self, p: TreePoint) -> Value {
        let (a, b, off) = p.parts();
        if let Some((ray, q)) = self.ray_offset(p) {
            return json!({"ray": ray, "q": q});
        }
        if off == 0 {
            match self.adj[a].first() {
                Some(&w) if a < w => json!({"edge": [self.label(a), self.label(w)], "q": 0}),
                Some(&w) => json!({"edge": [self.label(w), self.label(a)], "q": EDGE}),
                None => json!({"edge": [self.label(a), self.label(a)], "q": 0}),
            }
        } else {
            json!({"edge": [self.label(a), self.label(b)], "q": off})
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 0 - 1 - 2 - 3 with a branch 1 - 4 - 5.
    fn sample() -> Tree {
        let mut b = TreeBuilder::new();
        for i in 0..6 {
            b.add_vertex(format!("t{i}"));
        }
        for (u, v) in [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)] {
            b.add_edge(u, v).unwrap();
        }
        b.build().unwrap()
    }

    #[test]
    fn vertex_distances() {
        let t = sample();
        assert_eq!(t.vertex_dist(0, 3), 12);
        assert_eq!(t.vertex_dist(3, 5), 16);
        assert_eq!(t.vertex_dist(4, 4), 0);
        assert_eq!(t.lca(3, 5), 1);
    }

    #[test]
    fn edge_points_normalize() {
        assert_eq!(TreePoint::on_edge(3, 2, 1), TreePoint::on_edge(2, 3, 3));
        assert_eq!(TreePoint::on_edge(3, 2, 4), TreePoint::vertex(2));
        assert_eq!(TreePoint::on_edge(3, 2, 0), TreePoint::vertex(3));
    }

    #[test]
    fn point_distances() {
        let t = sample();
        let m23 = TreePoint::on_edge(2, 3, 2);
        let q45 = TreePoint::on_edge(4, 5, 1);
        assert_eq!(t.dist(m23, TreePoint::vertex(1)), 6);
        assert_eq!(t.dist(m23, q45), 6 + 4 + 1);
        assert_eq!(t.dist(q45, m23), 11);
        assert_eq!(t.dist(m23, TreePoint::on_edge(2, 3, 3)), 1);
        assert_eq!(t.dist(TreePoint::vertex(2), m23), 2);
    }

    #[test]
    fn stepping_along_geodesics() {
        let t = sample();
        let from = TreePoint::on_edge(2, 3, 2);
        let to = TreePoint::on_edge(4, 5, 3);
        let d = t.dist(from, to);
        for s in 0..=d {
            let q = t.step_toward(from, to, s);
            assert_eq!(t.dist(from, q), s);
            assert_eq!(t.dist(q, to), d - s);
        }
        assert_eq!(t.step_toward(from, to, 2), TreePoint::vertex(2));
    }

    #[test]
    fn directions() {
        let t = sample();
        // neighbours of 1 sorted: [0, 2, 4]
        assert_eq!(t.direction(TreePoint::vertex(1), TreePoint::vertex(5)), 2);
        assert_eq!(t.direction(TreePoint::vertex(1), TreePoint::vertex(0)), 0);
        assert_eq!(t.direction(TreePoint::vertex(1), TreePoint::on_edge(2, 3, 1)), 1);
        let m = TreePoint::on_edge(1, 2, 2);
        assert_eq!(t.direction(m, TreePoint::vertex(5)), 0);
        assert_eq!(t.direction(m, TreePoint::vertex(3)), 1);
    }

    #[test]
    fn rejects_cycles() {
        let mut b = TreeBuilder::new();
        for i in 0..3 {
            b.add_vertex(i.to_string());
        }
        b.add_edge(0, 1).unwrap();
        b.add_edge(1, 2).unwrap();
        assert_eq!(b.add_edge(1, 0), Err(TreeError::BadEdge(1, 0)));
        b.add_edge(2, 0).unwrap();
        assert!(matches!(b.build(), Err(TreeError::NotATree)));
    }

    #[test]
    fn ray_points_serialize_by_distance() {
        let mut b = TreeBuilder::new();
        let g = b.add_vertex("g");
        let h = b.add_vertex("h");
        b.add_edge(g, h).unwrap();
        let ray = b.add_ray(g, 3, "r");
        let t = b.build().unwrap();
        let v2 = t.rays()[ray].vertices[2];
        let v3 = t.rays()[ray].vertices[3];
        assert_eq!(t.point_json(TreePoint::on_edge(v2, v3, 1)), json!({"ray": 0, "q": 9}));
        assert_eq!(t.point_json(TreePoint::vertex(v3)), json!({"ray": 0, "q": 12}));
        assert_eq!(t.point_json(TreePoint::vertex(h)), json!({"edge": ["g", "h"], "q": 4}));
        let v1 = t.rays()[ray].vertices[1];
        assert_eq!(t.point_json(TreePoint::on_edge(g, v1, 2)), json!({"ray": 0, "q": 2}));
        assert_eq!(t.point_json(TreePoint::vertex(g)), json!({"edge": ["g", "h"], "q": 0}));
    }
}
