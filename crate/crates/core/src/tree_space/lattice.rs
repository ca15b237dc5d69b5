//! Pairs `(p, r)` of a tree point and a radius, both in quarter units.
//!
//! Grid points have `p` on the first subdivision with `r` a half-integer, and
//! `p` is a tree vertex exactly when `r` is an integer. Grid points over tree
//! vertices are colored black or white by the parity of the distance to the
//! basepoint (vertex 0) plus the radius. Black points are the minimal and
//! white points the maximal elements of the induced partial order.

use super::tree::{Tree, TreePoint, EDGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub p: TreePoint,
    pub r4: i64,
}

impl LatticePoint {
    pub fn new(p: TreePoint, r4: i64) -> Self {
        LatticePoint { p, r4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    White,
    None,
}

pub fn is_grid_point(x: &LatticePoint) -> bool {
    x.p.is_half_grid() && x.r4 % 2 == 0 && x.p.is_vertex() == (x.r4 % 4 == 0)
}

/// Points of the second subdivision paired with quarter radii, coupled the
/// same way one level down.
pub fn is_fine_point(x: &LatticePoint) -> bool {
    x.p.is_half_grid() == (x.r4 % 2 == 0)
}

pub fn color(tree: &Tree, x: &LatticePoint) -> Color {
    match x.p.as_vertex() {
        Some(v) if x.r4 % 4 == 0 => {
            let units = tree.vertex_dist(v, 0) / EDGE + x.r4 / 4;
            if units % 2 == 0 {
                Color::Black
            } else {
                Color::White
            }
        }
        _ => Color::None,
    }
}

fn adjacent(tree: &Tree, x: &LatticePoint, y: &LatticePoint) -> bool {
    tree.dist(x.p, y.p) == 2 && (x.r4 - y.r4).abs() == 2
}

/// The partial order on grid points.
pub fn leq(tree: &Tree, x: &LatticePoint, y: &LatticePoint) -> bool {
    if x == y {
        return true;
    }
    let (cx, cy) = (color(tree, x), color(tree, y));
    if adjacent(tree, x, y) {
        return (cx == Color::Black && cy == Color::None)
            || (cx == Color::None && cy == Color::White);
    }
    if cx == Color::Black && cy == Color::White {
        let d = tree.dist(x.p, y.p);
        let dr = (x.r4 - y.r4).abs();
        return (d == 0 && dr == 4) || (d == EDGE && dr == 0);
    }
    false
}

/// Midpoint of two grid points; lies on the fine lattice.
pub fn midpoint(tree: &Tree, x: &LatticePoint, y: &LatticePoint) -> LatticePoint {
    let d = tree.dist(x.p, y.p);
    debug_assert!(d % 2 == 0 && (x.r4 + y.r4) % 2 == 0);
    LatticePoint::new(tree.step_toward(x.p, y.p, d / 2), (x.r4 + y.r4) / 2)
}

/// The unique comparable pair `(lo, hi)` of grid points with midpoint `z`.
pub fn round_pair(tree: &Tree, z: &LatticePoint) -> (LatticePoint, LatticePoint) {
    assert!(is_fine_point(z), "{z:?} is off the fine lattice");
    if is_grid_point(z) {
        return (*z, *z);
    }
    let (a, b, off) = z.p.parts();
    let t = z.r4;
    let (x, y) = match off {
        0 => (LatticePoint::new(z.p, t - 2), LatticePoint::new(z.p, t + 2)),
        2 => (
            LatticePoint::new(TreePoint::vertex(a), t),
            LatticePoint::new(TreePoint::vertex(b), t),
        ),
        _ => {
            let near = if off == 1 { a } else { b };
            let far_mid = TreePoint::on_edge(a, b, 2);
            let (rv, rm) = if (t - 1).rem_euclid(4) == 0 { (t - 1, t + 1) } else { (t + 1, t - 1) };
            (LatticePoint::new(TreePoint::vertex(near), rv), LatticePoint::new(far_mid, rm))
        }
    };
    if leq(tree, &x, &y) {
        (x, y)
    } else {
        debug_assert!(leq(tree, &y, &x));
        (y, x)
    }
}

/// Largest coordinatewise `dist + |radius gap|`, in quarter units.
pub fn d_inf(tree: &Tree, xs: &[LatticePoint], ys: &[LatticePoint]) -> i64 {
    assert_eq!(xs.len(), ys.len());
    xs.iter()
        .zip(ys)
        .map(|(x, y)| tree.dist(x.p, y.p) + (x.r4 - y.r4).abs())
        .max()
        .unwrap_or(0)
}

/// Points reachable from a colored point through one uncolored neighbour.
fn ring(tree: &Tree, x: &LatticePoint) -> Vec<LatticePoint> {
    let v = x.p.as_vertex().expect("colored points sit on vertices");
    let mut out = vec![LatticePoint::new(x.p, x.r4 + 4), LatticePoint::new(x.p, x.r4 - 4)];
    for k in 0..tree.degree(v) {
        let m = tree.star_neighbor(x.p, k);
        out.push(LatticePoint::new(m, x.r4 + 2));
        out.push(LatticePoint::new(m, x.r4 - 2));
        out.push(LatticePoint::new(TreePoint::vertex(tree.vertex_neighbor(v, k)), x.r4));
    }
    out
}

/// `(up, down)`: grid points `y` with `x ⪯ y`, resp. `y ⪯ x`, restricted to
/// nonnegative radii. Both lists contain `x` and are sorted.
pub fn local_neighborhood(tree: &Tree, x: &LatticePoint) -> (Vec<LatticePoint>, Vec<LatticePoint>) {
    let mut up = vec![*x];
    let mut down = vec![*x];
    match color(tree, x) {
        Color::Black => up.extend(ring(tree, x)),
        Color::White => down.extend(ring(tree, x)),
        Color::None => {
            for k in 0..2 {
                let end = tree.star_neighbor(x.p, k);
                for r4 in [x.r4 - 2, x.r4 + 2] {
                    let y = LatticePoint::new(end, r4);
                    match color(tree, &y) {
                        Color::White => up.push(y),
                        Color::Black => down.push(y),
                        Color::None => unreachable!("neighbours of uncolored points are colored"),
                    }
                }
            }
        }
    }
    for list in [&mut up, &mut down] {
        list.retain(|y| y.r4 >= 0);
        list.sort();
    }
    (up, down)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_space::TreeBuilder;

    /// Vertex 0 of degree 3 with leaves 1, 2, 3; leaf 3 continues to 4.
    fn claw() -> Tree {
        let mut b = TreeBuilder::new();
        for i in 0..5 {
            b.add_vertex(i.to_string());
        }
        for (u, v) in [(0, 1), (0, 2), (0, 3), (3, 4)] {
            b.add_edge(u, v).unwrap();
        }
        b.build().unwrap()
    }

    fn pt(v: usize, r4: i64) -> LatticePoint {
        LatticePoint::new(TreePoint::vertex(v), r4)
    }

    fn mid(u: usize, v: usize, r4: i64) -> LatticePoint {
        LatticePoint::new(TreePoint::on_edge(u, v, 2), r4)
    }

    /// All grid points on the claw with radius up to `max_r4`.
    fn grid(t: &Tree, max_r4: i64) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for p in t.half_grid_ball(TreePoint::vertex(0), 100) {
            for r4 in (0..=max_r4).step_by(2) {
                let x = LatticePoint::new(p, r4);
                if is_grid_point(&x) {
                    out.push(x);
                }
            }
        }
        out
    }

    #[test]
    fn coloring() {
        let t = claw();
        assert_eq!(color(&t, &pt(0, 0)), Color::Black);
        assert_eq!(color(&t, &pt(1, 0)), Color::White);
        assert_eq!(color(&t, &pt(4, 4)), Color::White);
        assert_eq!(color(&t, &mid(0, 1, 2)), Color::None);
    }

    #[test]
    fn order_runs_from_black_to_white() {
        let t = claw();
        let m = mid(0, 1, 2);
        assert!(leq(&t, &pt(0, 0), &m));
        assert!(leq(&t, &m, &pt(1, 0)));
        assert!(!leq(&t, &m, &pt(0, 0)));
        assert!(leq(&t, &pt(0, 0), &pt(1, 0)));
        assert!(leq(&t, &pt(0, 0), &pt(0, 4)));
        assert!(!leq(&t, &pt(0, 0), &pt(4, 0)));
        assert!(leq(&t, &m, &m));
    }

    #[test]
    fn order_is_a_partial_order() {
        let t = claw();
        let g = grid(&t, 8);
        for x in &g {
            for y in &g {
                if x != y && leq(&t, x, y) {
                    assert!(!leq(&t, y, x));
                    for z in &g {
                        if leq(&t, y, z) {
                            assert!(leq(&t, x, z), "{x:?} {y:?} {z:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn midpoints() {
        let t = claw();
        assert_eq!(midpoint(&t, &pt(0, 0), &pt(0, 0)), pt(0, 0));
        assert_eq!(midpoint(&t, &pt(0, 0), &pt(1, 0)), mid(0, 1, 0));
        let z = midpoint(&t, &pt(0, 0), &mid(0, 1, 2));
        assert_eq!(z, LatticePoint::new(TreePoint::on_edge(0, 1, 1), 1));
        assert!(is_fine_point(&z));
    }

    #[test]
    fn rounding_recovers_comparable_pairs() {
        let t = claw();
        let g = grid(&t, 8);
        for x in &g {
            for y in &g {
                let z = midpoint(&t, x, y);
                let (lo, hi) = round_pair(&t, &z);
                assert!(leq(&t, &lo, &hi));
                assert_eq!(midpoint(&t, &lo, &hi), z);
                if leq(&t, x, y) {
                    assert_eq!((lo, hi), (*x, *y));
                }
            }
        }
    }

    #[test]
    fn rounding_quarter_points_by_brute_force() {
        let t = claw();
        let g = grid(&t, 12);
        let z = LatticePoint::new(TreePoint::on_edge(3, 4, 3), 5);
        let mut pairs: Vec<_> = g
            .iter()
            .flat_map(|x| g.iter().map(move |y| (*x, *y)))
            .filter(|(x, y)| leq(&t, x, y) && midpoint(&t, x, y) == z)
            .collect();
        assert_eq!(pairs.len(), 1);
        assert_eq!(round_pair(&t, &z), pairs.pop().unwrap());
    }

    #[test]
    fn l_inf_distance() {
        let t = claw();
        assert_eq!(d_inf(&t, &[pt(0, 0)], &[pt(0, 0)]), 0);
        assert_eq!(d_inf(&t, &[pt(0, 0)], &[pt(1, 4)]), 8);
        assert_eq!(d_inf(&t, &[pt(0, 0), pt(0, 0)], &[pt(1, 0), pt(4, 0)]), 8);
    }

    #[test]
    fn neighborhoods_match_the_order() {
        let t = claw();
        let g = grid(&t, 12);
        for x in g.iter().filter(|x| x.r4 <= 8) {
            let (up, down) = local_neighborhood(&t, x);
            let mut want_up: Vec<_> = g.iter().filter(|y| leq(&t, x, y)).copied().collect();
            let mut want_down: Vec<_> = g.iter().filter(|y| leq(&t, y, x)).copied().collect();
            want_up.sort();
            want_down.sort();
            assert_eq!(up, want_up, "{x:?}");
            assert_eq!(down, want_down, "{x:?}");
        }
    }

    #[test]
    fn black_center_has_full_upper_ring() {
        let t = claw();
        let (up, down) = local_neighborhood(&t, &pt(0, 8));
        assert_eq!(up.len(), 1 + 2 + 3 * 3);
        assert_eq!(down, vec![pt(0, 8)]);
        let (up, _) = local_neighborhood(&t, &pt(0, 0));
        assert!(up.iter().all(|y| y.r4 >= 0));
        assert_eq!(up.len(), 1 + 1 + 3 * 2);
    }
}
