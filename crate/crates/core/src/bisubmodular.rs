//! The degree-three capacity function and its submodular extension on the
//! six signed elements `1+, 2+, 3+, 1-, 2-, 3-`.
//!
//! Subsets are 6-bit masks: bit `k` is `(k+1)+` and bit `3 + k` is `(k+1)-`.
//! Half-integral vectors on `{1, 2, 3}` are stored doubled.

/// Number of signed elements in a block.
pub const BLOCK: usize = 6;
pub const FULL: u8 = 0b11_1111;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignedSubset(pub u8);

impl SignedSubset {
    pub fn plus(self) -> u8 {
        self.0 & 0b111
    }

    pub fn minus(self) -> u8 {
        (self.0 >> 3) & 0b111
    }

    pub fn contains(self, elem: usize) -> bool {
        self.0 >> elem & 1 == 1
    }

    /// Drops every element whose partner is also present.
    pub fn underline(self) -> Self {
        let both = self.plus() & self.minus();
        SignedSubset(self.0 & !(both | both << 3))
    }

    /// Adds both elements of every pair that is entirely absent.
    pub fn overline(self) -> Self {
        let none = !(self.plus() | self.minus()) & 0b111;
        SignedSubset(self.0 | none | none << 3)
    }

    pub fn is_transversal(self) -> bool {
        self.plus() & self.minus() == 0
    }
}

/// Partner of a signed element: `k+` and `k-` are swapped.
pub fn bar(elem: usize) -> usize {
    (elem + 3) % BLOCK
}

/// The six-way subset classification; returns 1..=6.
pub fn classify_type(x: SignedSubset) -> u8 {
    let (np, nm) = (x.plus().count_ones(), x.minus().count_ones());
    if np == 0 || nm == 3 {
        3
    } else if np >= 2 && nm <= 1 {
        1
    } else if np == 2 {
        4
    } else if np == 3 {
        6
    } else if x.plus() | x.minus() == 0b111 {
        2
    } else {
        5
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BlockError {
    #[error("sets {0:#05b} and {1:#05b} overlap")]
    NotDisjoint(u8, u8),
    #[error("vector is not in the base polyhedron")]
    NotInBase,
}

/// The bisubmodular function on disjoint pairs `(Y, Z)` of `{1,2,3}`, given as bitmasks.
pub fn delta_b(b: i64, y: u8, z: u8) -> Result<i64, BlockError> {
    if y & z != 0 {
        return Err(BlockError::NotDisjoint(y, z));
    }
    Ok(match (y.count_ones(), z.count_ones()) {
        (ny, _) if ny >= 2 => 2 * b,
        (1, nz) if nz <= 1 => b,
        _ => 0,
    })
}

pub fn delta_star(b: i64, x: SignedSubset) -> i64 {
    match classify_type(x) {
        1 => 2 * b,
        2 | 3 => 0,
        _ => b,
    }
}

pub fn subset_sum(x: &[i64; BLOCK], mask: u8) -> i64 {
    (0..BLOCK).filter(|&k| mask >> k & 1 == 1).map(|k| x[k]).sum()
}

/// A capacity `b` with its 64 precomputed extension values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedBlock {
    pub b: i64,
    table: [i64; 64],
}

impl SignedBlock {
    pub fn new(b: i64) -> Self {
        let mut table = [0; 64];
        for (mask, v) in table.iter_mut().enumerate() {
            *v = delta_star(b, SignedSubset(mask as u8));
        }
        SignedBlock { b, table }
    }

    pub fn value(&self, mask: u8) -> i64 {
        self.table[mask as usize]
    }

    pub fn in_base(&self, x: &[i64; BLOCK]) -> bool {
        subset_sum(x, FULL) == 0 && (0..64u8).all(|m| subset_sum(x, m) <= self.value(m))
    }

    /// Largest `alpha` with `x + alpha (e_u - e_v)` still in the base polyhedron.
    pub fn exchange_capacity(&self, x: &[i64; BLOCK], u: usize, v: usize) -> Result<i64, BlockError> {
        if !self.in_base(x) {
            return Err(BlockError::NotInBase);
        }
        Ok(self.kappa(x, u, v))
    }

    /// Exchange capacity without the membership check.
    pub fn kappa(&self, x: &[i64; BLOCK], u: usize, v: usize) -> i64 {
        assert_ne!(u, v);
        let rest: Vec<usize> = (0..BLOCK).filter(|&k| k != u && k != v).collect();
        let mut best = i64::MAX;
        for bits in 0..16u8 {
            let mut mask = 1u8 << u;
            for (j, &k) in rest.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    mask |= 1 << k;
                }
            }
            best = best.min(self.value(mask) - subset_sum(x, mask));
        }
        best
    }
}

pub fn in_base(b: i64, x: &[i64; BLOCK]) -> bool {
    SignedBlock::new(b).in_base(x)
}

pub fn exchange_capacity(b: i64, x: &[i64; BLOCK], u: usize, v: usize) -> Result<i64, BlockError> {
    SignedBlock::new(b).exchange_capacity(x, u, v)
}

/// Doubled projection: `x(k+) - x(k-)` per coordinate.
pub fn project_phi(x: &[i64; BLOCK]) -> [i64; 3] {
    [x[0] - x[3], x[1] - x[4], x[2] - x[5]]
}

/// Membership of a doubled vector in the polyhedron of `delta_b`.
pub fn in_d_delta(b: i64, z2: [i64; 3]) -> bool {
    let [a, c, d] = z2;
    a >= 0 && c >= 0 && d >= 0 && a + c + d <= 4 * b && a <= c + d && c <= a + d && d <= a + c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[&str]) -> SignedSubset {
        let mut m = 0u8;
        for e in elems {
            let k: u8 = e[..1].parse().unwrap();
            m |= 1 << (k - 1 + if e.ends_with('-') { 3 } else { 0 });
        }
        SignedSubset(m)
    }

    #[test]
    fn types() {
        assert_eq!(classify_type(set(&["1+", "2+", "3+", "2-"])), 1);
        assert_eq!(classify_type(set(&[])), 3);
        assert_eq!(classify_type(set(&["1+", "2+", "1-", "2-"])), 4);
        assert_eq!(classify_type(set(&["1+", "2-", "3-"])), 2);
        assert_eq!(classify_type(set(&["1+", "1-", "2-"])), 5);
        assert_eq!(classify_type(set(&["1+", "2+", "3+", "1-", "3-"])), 6);
        assert_eq!(classify_type(SignedSubset(FULL)), 3);
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_b(5, 0b011, 0), Ok(10));
        assert_eq!(delta_b(3, 0b001, 0b110), Ok(0));
        assert_eq!(delta_b(3, 0, 0b001), Ok(0));
        assert_eq!(delta_b(3, 0b001, 0b001), Err(BlockError::NotDisjoint(1, 1)));
        assert_eq!(delta_star(1, set(&["1+", "2+"])), 2);
        assert_eq!(delta_star(1, set(&["1+", "2-", "3-"])), 0);
        assert_eq!(delta_star(4, SignedSubset(FULL)), 0);
    }

    #[test]
    fn overline_and_underline() {
        assert_eq!(set(&["1+"]).overline(), set(&["1+", "2+", "3+", "2-", "3-"]));
        assert_eq!(set(&["2+", "2-", "1-"]).underline(), set(&["1-"]));
    }

    #[test]
    fn base_membership() {
        assert!(in_base(1, &[0; 6]));
        assert!(in_base(1, &[1, 1, 0, -1, -1, 0]));
        assert!(!in_base(1, &[1, 0, 0, -1, 0, 0]));
    }

    #[test]
    fn exchange_capacities() {
        assert_eq!(exchange_capacity(1, &[0; 6], 0, 4), Ok(1));
        assert_eq!(exchange_capacity(1, &[0; 6], 0, 3), Ok(0));
        assert_eq!(exchange_capacity(1, &[1, 1, 0, -1, -1, 0], 2, 5), Ok(0));
        assert_eq!(exchange_capacity(1, &[1, 0, 0, -1, 0, 0], 2, 5), Err(BlockError::NotInBase));
    }

    #[test]
    fn exchange_capacity_is_tight() {
        let block = SignedBlock::new(2);
        let x = [1, 1, 0, -1, -1, 0];
        for u in 0..BLOCK {
            for v in (0..BLOCK).filter(|&v| v != u) {
                let k = block.kappa(&x, u, v);
                assert!(k >= 0);
                let mut y = x;
                y[u] += k;
                y[v] -= k;
                assert!(block.in_base(&y));
                y[u] += 1;
                y[v] -= 1;
                assert!(!block.in_base(&y));
            }
        }
    }

    #[test]
    fn projection() {
        assert_eq!(project_phi(&[0; 6]), [0, 0, 0]);
        assert_eq!(project_phi(&[1, 1, 0, -1, -1, 0]), [2, 2, 0]);
        assert!(in_d_delta(3, [6, 6, 0]));
        assert!(in_d_delta(3, [0, 0, 0]));
        assert!(!in_d_delta(3, [6, 0, 0]));
    }
}
