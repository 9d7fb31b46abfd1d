//! Hand-written recurrences for the sphere, projective plane, disk and
//! Möbius band.
//!
//! These ignore branch points (no semiedges) and are kept separate from the
//! generic engine so that the two can check each other.  All sizes are in
//! darts; the root dart is the leftmost dart at its vertex.

use std::collections::HashMap;

use num_bigint::BigUint;

/// Which disk count to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiskVariant {
    /// Root vertex in the interior (`d`).
    Interior,
    /// Root on the boundary, no boundary edges at the root (`d⁽⁰⁾`).
    Corner,
    /// Root dart is the only boundary edge at the root (`d⁽¹⁾`).
    OneEdge,
    /// Two boundary edges at the root (`d⁽²⁾`).
    TwoEdges,
    /// Root with a boundary edge on its left iff `root_left`, a cut corner on
    /// its right, and one more distinguished boundary vertex whose right side
    /// is a corner and whose left side carries a boundary edge iff
    /// `mark_left` (`d^(i1,{0,i2})`).
    Marked { root_left: bool, mark_left: bool },
}

/// Which Möbius-band count to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoebiusVariant {
    Interior,
    /// `m⁽⁰⁾`.
    Corner,
    /// `m⁽¹⁾`.
    OneEdge,
    /// Two boundary edges at the root.
    TwoEdges,
}

/// Memo tables for every family; one instance can answer many queries.
#[derive(Default)]
pub struct Recurrences {
    s: HashMap<(i32, i32), u128>,
    p: HashMap<(i32, i32), u128>,
    d: HashMap<(u8, i32, i32), u128>,
    marked: HashMap<(i32, i32, bool, bool, bool, bool), u128>,
    m: HashMap<(u8, i32, i32), u128>,
    /// Use the contraction exactly as printed for two boundary edges
    /// (children `d⁽⁰⁾ + d⁽¹⁾`) instead of `d⁽¹⁾ + d⁽²⁾`.
    pub printed_two_edge_rule: bool,
}

macro_rules! memo {
    ($self:ident . $tab:ident, $key:expr, $body:block) => {{
        let key = $key;
        if let Some(&v) = $self.$tab.get(&key) {
            return v;
        }
        let v: u128 = $body;
        $self.$tab.insert(key, v);
        v
    }};
}

impl Recurrences {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rooted planar maps with `n` darts and root degree `k`.
    pub fn s(&mut self, n: i32, k: i32) -> u128 {
        if n < 0 || k < 0 || k > n {
            return 0;
        }
        if n == 0 {
            return (k == 0) as u128;
        }
        if k == 0 {
            return 0;
        }
        memo!(self.s, (n, k), {
            let mut t = 0;
            for kk in (k - 1)..=(n - 2) {
                t += self.s(n - 2, kk);
            }
            for j in 1..k {
                for n1 in 0..=(n - 2) {
                    t += self.s(n1, j - 1) * self.s(n - 2 - n1, k - 1 - j);
                }
            }
            t
        })
    }

    /// Rooted projective-plane maps with `n` darts and root degree `k`.
    pub fn p(&mut self, n: i32, k: i32) -> u128 {
        if n < 2 || k < 1 || k > n {
            return 0;
        }
        memo!(self.p, (n, k), {
            let mut t = 0;
            for kk in (k - 1)..=(n - 2) {
                t += self.p(n - 2, kk);
            }
            for j in 1..k {
                for n1 in 0..=(n - 2) {
                    t += 2 * self.s(n1, j - 1) * self.p(n - 2 - n1, k - 1 - j);
                }
            }
            t + (k as u128 - 1) * self.s(n - 2, k - 2)
        })
    }

    fn d_raw(&mut self, v: u8, n: i32, k: i32) -> u128 {
        if n < 0 || k < 0 {
            return 0;
        }
        if n == 0 {
            // Only the empty corner survives as a piece of a split.
            return (v == 0 && k == 0) as u128;
        }
        if k > n {
            return 0;
        }
        memo!(self.d, (v, n, k), {
            match v {
                0 => self.d0(n, k),
                1 => self.d1(n, k),
                2 => self.d2(n, k),
                _ => self.d_int(n, k),
            }
        })
    }

    fn d0(&mut self, n: i32, k: i32) -> u128 {
        if k == 0 {
            return 0;
        }
        let mut t = self.d_raw(0, n - 1, k - 1);
        for kk in 0..=(n - k - 1) {
            t += self.d_raw(0, n - 2, k - 1 + kk);
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(k - 2) {
                t += self.d_raw(0, n1, kk) * self.s(n - n1 - 2, k - kk - 2);
            }
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(n - k - 1) {
                for k2 in 0..=kk {
                    for i1 in 0..2 {
                        for i2 in 0..2 {
                            t += self.d_raw(i1, n - 2 - n1, k + k2 - 1) * self.d_raw(i2, n1, kk - k2);
                        }
                    }
                }
            }
        }
        t
    }

    fn d1(&mut self, n: i32, k: i32) -> u128 {
        let mut t = 0;
        for kk in 0..=(n - k - 1) {
            t += self.d_raw(0, n - 1, k + kk) + self.d_raw(1, n - 1, k + kk);
        }
        t
    }

    fn d2(&mut self, n: i32, k: i32) -> u128 {
        let mut t = self.s(n - 1, k);
        for kk in 0..=(n - k - 1) {
            t += if self.printed_two_edge_rule {
                self.d_raw(0, n - 1, k + kk) + self.d_raw(1, n - 1, k + kk)
            } else {
                self.d_raw(1, n - 1, k + kk) + self.d_raw(2, n - 1, k + kk)
            };
        }
        t
    }

    fn d_int(&mut self, n: i32, k: i32) -> u128 {
        if k == 0 {
            return 0;
        }
        let mut t = self.d_raw(0, n - 1, k - 1);
        for kk in 0..=(n - k - 1) {
            t += self.d_raw(3, n - 2, k + kk - 1);
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(k - 2) {
                t += 2 * self.d_raw(3, n1, kk) * self.s(n - n1 - 2, k - kk - 2);
            }
        }
        for kk in 0..=(n - k - 1) {
            for i in 0..3u8 {
                let mult = if i == 1 { 2 } else { 1 };
                t += mult * (kk as u128 + 1) * self.d_raw(i, n - 2, k + kk - 1);
            }
        }
        t
    }

    /// Unmarked disk with arbitrary sides; a corner on the left and an edge
    /// on the right is the mirror image of `d⁽¹⁾`.
    fn disk_sides(&mut self, n: i32, k: i32, l: bool, r: bool) -> u128 {
        self.d_raw(l as u8 + r as u8, n, k)
    }

    /// Disk with root sides `(l, r)` and one extra marked boundary vertex
    /// with sides `(ml, mr)`.
    fn marked(&mut self, n: i32, k: i32, l: bool, r: bool, ml: bool, mr: bool) -> u128 {
        if n <= 0 || k < 0 || k > n {
            return 0;
        }
        if !l && r {
            // Reflect so that a boundary edge, if any, is on the left.
            return self.marked(n, k, true, false, mr, ml);
        }
        memo!(self.marked, (n, k, l, r, ml, mr), {
            let mut t = 0;
            if l {
                for a in 0..=(n - 1) {
                    for ly in [false, true] {
                        t += self.marked(n - 1, a + k, ly, r, ml, mr);
                    }
                    if mr {
                        t += self.disk_sides(n - 1, a + k, ml, r);
                    }
                }
            } else if k > 0 {
                t += self.marked(n - 1, k - 1, false, r, ml, mr);
                for a in 0..=(n - 2) {
                    t += self.marked(n - 2, k - 1 + a, false, r, ml, mr);
                }
                for q in 2..=k {
                    for n1 in 0..=(n - 2) {
                        t += self.marked(n1, k - q, false, r, ml, mr) * self.s(n - 2 - n1, q - 2);
                    }
                }
                for n1 in 0..=(n - 2) {
                    let n2 = n - 2 - n1;
                    for a in 0..=n1 {
                        for b in 0..=n2 {
                            for ly in [false, true] {
                                for ry in [false, true] {
                                    // Far end before the mark, or after it.
                                    t += self.disk_sides(n1, a + k - 1, ly, r)
                                        * self.marked(n2, b, false, ry, ml, mr);
                                    t += self.marked(n1, a + k - 1, ly, r, ml, mr)
                                        * self.disk_sides(n2, b, false, ry);
                                }
                            }
                            t += self.disk_sides(n1, a + k - 1, ml, r) * self.disk_sides(n2, b, false, mr);
                        }
                    }
                }
            }
            t
        })
    }

    fn m_raw(&mut self, v: u8, n: i32, k: i32) -> u128 {
        if n <= 0 || k < 0 || k > n {
            return 0;
        }
        memo!(self.m, (v, n, k), {
            match v {
                0 => self.m0(n, k),
                1 => {
                    let mut t = 0;
                    for kk in 0..=(n - 1) {
                        t += self.m_raw(0, n - 1, k + kk) + self.m_raw(1, n - 1, k + kk);
                    }
                    t
                }
                2 => {
                    let mut t = self.p(n - 1, k);
                    for kk in 0..=(n - 1) {
                        t += self.m_raw(1, n - 1, k + kk) + self.m_raw(2, n - 1, k + kk);
                    }
                    t
                }
                _ => self.m_int(n, k),
            }
        })
    }

    fn m0(&mut self, n: i32, k: i32) -> u128 {
        if k == 0 {
            return 0;
        }
        let mut t = self.m_raw(0, n - 1, k - 1);
        for kk in 0..=(n - k - 1) {
            t += self.m_raw(0, n - 2, k - 1 + kk);
        }
        if k >= 2 {
            t += (k as u128 - 1) * self.d_raw(0, n - 2, k - 2);
        }
        for kk in 0..=(n - k - 1) {
            for i1 in [false, true] {
                for i2 in [false, true] {
                    t += self.marked(n - 2, k - 1 + kk, i1, false, i2, false);
                }
            }
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(k - 2) {
                t += self.d_raw(0, n1, kk) * self.p(n - n1 - 2, k - kk - 2);
                t += self.m_raw(0, n1, kk) * self.s(n - n1 - 2, k - kk - 2);
            }
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(n - k - 1) {
                for k2 in 0..=kk {
                    for i1 in 0..2 {
                        for i2 in 0..2 {
                            let (na, ka, nb, kb) = (n - 2 - n1, k + k2 - 1, n1, kk - k2);
                            t += self.m_raw(i1, na, ka) * self.d_raw(i2, nb, kb);
                            t += self.d_raw(i1, na, ka) * self.m_raw(i2, nb, kb);
                        }
                    }
                }
            }
        }
        t
    }

    fn m_int(&mut self, n: i32, k: i32) -> u128 {
        if k == 0 {
            return 0;
        }
        let mut t = self.m_raw(0, n - 1, k - 1);
        for kk in 0..=(n - k - 1) {
            t += self.m_raw(3, n - 2, k + kk - 1);
        }
        for n1 in 0..=(n - 2) {
            for kk in 0..=(k - 2) {
                let rest = (n - n1 - 2, k - kk - 2);
                t += 2 * self.m_raw(3, n1, kk) * self.s(rest.0, rest.1);
                t += 2 * self.d_raw(3, n1, kk) * self.p(rest.0, rest.1);
            }
        }
        if k >= 2 {
            t += (k as u128 - 1) * self.d_raw(3, n - 2, k - 2);
        }
        for kk in 0..=(n - k - 1) {
            for i in 0..3u8 {
                let mult = if i == 1 { 2 } else { 1 };
                t += mult * (kk as u128 + 1) * self.m_raw(i, n - 2, k + kk - 1);
            }
        }
        t
    }

    pub fn disk(&mut self, n: i32, k: i32, variant: DiskVariant) -> u128 {
        match variant {
            DiskVariant::Interior => self.d_raw(3, n, k),
            DiskVariant::Corner => self.d_raw(0, n, k),
            DiskVariant::OneEdge => self.d_raw(1, n, k),
            DiskVariant::TwoEdges => self.d_raw(2, n, k),
            DiskVariant::Marked { root_left, mark_left } => {
                self.marked(n, k, root_left, false, mark_left, false)
            }
        }
    }

    pub fn moebius(&mut self, n: i32, k: i32, variant: MoebiusVariant) -> u128 {
        let v = match variant {
            MoebiusVariant::Corner => 0,
            MoebiusVariant::OneEdge => 1,
            MoebiusVariant::TwoEdges => 2,
            MoebiusVariant::Interior => 3,
        };
        self.m_raw(v, n, k)
    }
}

/// `s_{n,k}`: rooted planar maps by darts and root degree.
pub fn sphere_rooted(n: u32, k: u32) -> BigUint {
    BigUint::from(Recurrences::new().s(n as i32, k as i32))
}

/// `p_{n,k}`: rooted projective-plane maps by darts and root degree.
pub fn projective_rooted(n: u32, k: u32) -> BigUint {
    BigUint::from(Recurrences::new().p(n as i32, k as i32))
}

pub fn disk_counts(n: u32, k: u32, variant: DiskVariant) -> BigUint {
    BigUint::from(Recurrences::new().disk(n as i32, k as i32, variant))
}

pub fn moebius_counts(n: u32, k: u32, variant: MoebiusVariant) -> BigUint {
    BigUint::from(Recurrences::new().moebius(n as i32, k as i32, variant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute_oracle::{rooted_quotient_census, BorderedSurface};

    #[test]
    fn sphere_and_projective_plane() {
        let mut r = Recurrences::new();
        // the vertex map, then the link and the loop with one edge
        assert_eq!((r.s(0, 0), r.s(2, 1), r.s(2, 2)), (1, 1, 1));
        assert_eq!((r.p(0, 0), r.p(2, 2)), (0, 1));
        // the planar maps with two edges, summed over root degree
        assert_eq!((0..=4).map(|k| r.s(4, k)).sum::<u128>(), 9);
    }

    #[test]
    fn boundary_loop_and_degree_bound() {
        let mut r = Recurrences::new();
        assert_eq!(r.disk(1, 0, DiskVariant::TwoEdges), r.s(0, 0));
        for n in 0..8 {
            for k in n + 1..n + 4 {
                assert_eq!(r.disk(n, k, DiskVariant::Corner), 0);
                assert_eq!(r.moebius(n, k, MoebiusVariant::Corner), 0);
            }
        }
    }

    #[test]
    fn interior_roots_match_oracle() {
        let mut r = Recurrences::new();
        for n in 1..=6u64 {
            let census = rooted_quotient_census(n).unwrap();
            let oracle = |surface, k| -> BigUint {
                census
                    .iter()
                    .filter(|(c, _)| c.surface == surface && c.semiedges == 0 && !c.root_on_boundary && c.root_degree == k)
                    .map(|(_, v)| v)
                    .sum()
            };
            for k in 1..=n as usize {
                let (ni, ki) = (n as i32, k as i32);
                assert_eq!(BigUint::from(r.disk(ni, ki, DiskVariant::Interior)), oracle(BorderedSurface::DISK, k), "disk n={n} k={k}");
                assert_eq!(BigUint::from(r.moebius(ni, ki, MoebiusVariant::Interior)), oracle(BorderedSurface::MOEBIUS, k), "moebius n={n} k={k}");
            }
        }
    }
}
