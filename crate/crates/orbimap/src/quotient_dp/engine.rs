//! Root-edge contraction over bordered surfaces with marked vertices.
//!
//! A state is a rooted map on a surface with boundary, described only by what
//! later contractions can still see: the remaining dart budget, the capped
//! Euler characteristic, the root vertex, the vertices already glued to the
//! boundary (as marks on their component), and the interior vertices whose
//! degree is pinned by an earlier handle cut.  The value of a state is a
//! [`CellTable`] indexed by interior cells `c` and semiedge count `s`.
//!
//! Marks are labelled, so every choice of a particular mark is a separate
//! summand.  Non-root components are stored up to rotation, and in combined
//! mode also up to reversal, since their direction is not determined by the
//! root.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

/// Which surfaces a state ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    /// Orientable surfaces only.
    Orientable,
    /// All surfaces, orientable or not.
    Combined,
}

/// A vertex on a boundary component, seen with the component's direction.
///
/// `left`/`right` record whether a boundary edge leaves the vertex on that
/// side; a missing boundary edge means the side is a cut corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryVertexMark {
    pub left: bool,
    pub right: bool,
}

impl BoundaryVertexMark {
    pub const fn new(left: bool, right: bool) -> Self {
        BoundaryVertexMark { left, right }
    }

    /// The same vertex read in the opposite direction.
    pub fn flip(self) -> Self {
        BoundaryVertexMark { left: self.right, right: self.left }
    }

    fn bits(self) -> u8 {
        (self.left as u8) << 1 | self.right as u8
    }
}

type Mark = BoundaryVertexMark;

/// Where the root dart sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Root {
    /// Interior vertex of degree `k`.
    Interior(u8),
    /// Boundary vertex with `k` non-boundary darts and the given boundary edges.
    Boundary { k: u8, left: bool, right: bool },
    /// Flag-rooted total over every root position; only used as a cache key.
    Flag,
}

impl Root {
    fn degree(self) -> u8 {
        match self {
            Root::Interior(k) | Root::Boundary { k, .. } => k,
            Root::Flag => 0,
        }
    }

    fn with_degree(self, k: u8) -> Root {
        match self {
            Root::Interior(_) => Root::Interior(k),
            Root::Boundary { left, right, .. } => Root::Boundary { k, left, right },
            Root::Flag => Root::Flag,
        }
    }
}

/// Canonical description of a class of rooted quotient maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientKey {
    pub mode: Mode,
    pub n: u8,
    /// Euler characteristic with every boundary component capped by a disk.
    pub chi_hat: i8,
    pub root: Root,
    /// Marks on the root's boundary component, read rightward from the root.
    pub root_marks: Vec<Mark>,
    /// Other boundary components that carry marks, as cyclic lists.
    pub boundaries: Vec<Vec<Mark>>,
    /// Boundary components nobody has touched yet.
    pub bare_boundaries: u8,
    /// Degrees of distinguished interior vertices.
    pub interior_marks: Vec<u8>,
}

impl QuotientKey {
    /// A key with no marks.
    pub fn plain(mode: Mode, n: u8, chi_hat: i8, root: Root, bare_boundaries: u8) -> Self {
        QuotientKey {
            mode,
            n,
            chi_hat,
            root,
            root_marks: Vec::new(),
            boundaries: Vec::new(),
            bare_boundaries,
            interior_marks: Vec::new(),
        }
    }

    /// Length-prefixed canonical bytes; equal keys give equal bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![b'Q', 1];
        out.push(match self.mode {
            Mode::Orientable => 0,
            Mode::Combined => 1,
        });
        out.push(self.n);
        out.push(self.chi_hat as u8);
        match self.root {
            Root::Interior(k) => out.extend([0, k]),
            Root::Boundary { k, left, right } => {
                out.extend([1, k, (left as u8) << 1 | right as u8])
            }
            Root::Flag => out.push(2),
        }
        out.push(self.root_marks.len() as u8);
        out.extend(self.root_marks.iter().map(|m| m.bits()));
        out.push(self.boundaries.len() as u8);
        for b in &self.boundaries {
            out.push(b.len() as u8);
            out.extend(b.iter().map(|m| m.bits()));
        }
        out.push(self.bare_boundaries);
        out.push(self.interior_marks.len() as u8);
        out.extend(&self.interior_marks);
        out
    }

    /// Sorts marks and rotates every component to its canonical form.
    pub fn canonicalize(&mut self) {
        let mode = self.mode;
        for b in &mut self.boundaries {
            *b = canonical_cycle(b, mode);
        }
        self.boundaries.sort();
        self.interior_marks.sort_unstable();
    }

    fn mark_degree(&self) -> u32 {
        self.interior_marks.iter().map(|&d| d as u32).sum()
    }
}

fn revflip(v: &[Mark]) -> Vec<Mark> {
    v.iter().rev().map(|m| m.flip()).collect()
}

fn canonical_cycle(c: &[Mark], mode: Mode) -> Vec<Mark> {
    let mut best = c.to_vec();
    let mut consider = |v: &[Mark]| {
        for r in 0..v.len() {
            let rot: Vec<Mark> = v[r..].iter().chain(&v[..r]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    };
    consider(c);
    if mode == Mode::Combined {
        consider(&revflip(c));
    }
    best
}

/// Ways to read a marked component from a new attachment point in a gap.
///
/// Readings that coincide as labelled sequences describe the same children,
/// so they are returned once.
fn gap_readings(c: &[Mark], mode: Mode) -> Vec<Vec<Mark>> {
    let r = c.len();
    let mut seen: Vec<Vec<(usize, Mark)>> = Vec::new();
    for g in 0..r {
        seen.push((0..r).map(|t| ((g + t) % r, c[(g + t) % r])).collect());
    }
    if mode == Mode::Combined {
        for g in 0..r {
            let back: Vec<(usize, Mark)> = (1..=r)
                .map(|t| {
                    let i = (g + r - t) % r;
                    (i, c[i].flip())
                })
                .collect();
            if !seen.contains(&back) {
                seen.push(back);
            }
        }
    }
    seen.into_iter().map(|v| v.into_iter().map(|(_, m)| m).collect()).collect()
}

/// Ways to land on one of the marks of a component: the mark's sides in the
/// reading direction and the marks that follow it.
fn mark_readings(c: &[Mark], mode: Mode) -> Vec<(Mark, Vec<Mark>)> {
    let r = c.len();
    let mut seen: Vec<(usize, Mark, Vec<(usize, Mark)>)> = Vec::new();
    for i in 0..r {
        let rest = (1..r).map(|t| ((i + t) % r, c[(i + t) % r])).collect();
        seen.push((i, c[i], rest));
    }
    if mode == Mode::Combined {
        for i in 0..r {
            let rest = (1..r)
                .map(|t| {
                    let j = (i + r - t) % r;
                    (j, c[j].flip())
                })
                .collect();
            let entry = (i, c[i].flip(), rest);
            if !seen.contains(&entry) {
                seen.push(entry);
            }
        }
    }
    seen.into_iter()
        .map(|(_, m, rest)| (m, rest.into_iter().map(|(_, m)| m).collect()))
        .collect()
}

/// Counts indexed by interior cells `c` and semiedges `s`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CellTable {
    sdim: usize,
    rows: Vec<Vec<u128>>,
}

impl CellTable {
    pub fn zero(sdim: usize) -> Self {
        CellTable { sdim, rows: Vec::new() }
    }

    fn unit(c: usize, sdim: usize) -> Self {
        let mut t = CellTable::zero(sdim);
        t.bump(c, 0, 1);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(|&v| v == 0))
    }

    pub fn get(&self, c: usize, s: usize) -> u128 {
        self.rows.get(c).and_then(|r| r.get(s)).copied().unwrap_or(0)
    }

    /// Nonzero entries as `(c, s, count)`.
    pub fn entries(&self) -> Vec<(usize, usize, u128)> {
        let mut out = Vec::new();
        for (c, row) in self.rows.iter().enumerate() {
            for (s, &v) in row.iter().enumerate() {
                if v != 0 {
                    out.push((c, s, v));
                }
            }
        }
        out
    }

    pub fn total(&self) -> u128 {
        self.rows.iter().flatten().sum()
    }

    fn bump(&mut self, c: usize, s: usize, v: u128) {
        if s >= self.sdim || v == 0 {
            return;
        }
        if self.rows.len() <= c {
            self.rows.resize(c + 1, Vec::new());
        }
        let row = &mut self.rows[c];
        if row.len() <= s {
            row.resize(s + 1, 0);
        }
        row[s] += v;
    }

    /// `self += w * other`, shifted by `dc` cells and `ds` semiedges.
    fn add(&mut self, other: &CellTable, w: u128, dc: i32, ds: usize) {
        if w == 0 {
            return;
        }
        for (c, row) in other.rows.iter().enumerate() {
            for (s, &v) in row.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let c2 = c as i32 + dc;
                assert!(c2 >= 0, "negative cell count in contraction");
                self.bump(c2 as usize, s + ds, v * w);
            }
        }
    }

    fn mul(&self, other: &CellTable) -> CellTable {
        let mut out = CellTable::zero(self.sdim);
        for (c1, r1) in self.rows.iter().enumerate() {
            for (s1, &v1) in r1.iter().enumerate() {
                if v1 == 0 {
                    continue;
                }
                for (c2, r2) in other.rows.iter().enumerate() {
                    for (s2, &v2) in r2.iter().enumerate() {
                        if v2 != 0 {
                            out.bump(c1 + c2, s1 + s2, v1 * v2);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Everything a separating cut can hand to either side.
struct Part {
    boundaries: Vec<Vec<Mark>>,
    interior_marks: Vec<u8>,
    bare: u8,
}

/// All ways to split the non-root content of `key` between two pieces,
/// with the number of labelled assignments each split stands for.
fn splits(key: &QuotientKey) -> Vec<(u128, Part, Part)> {
    fn groups<T: Clone + PartialEq>(v: &[T]) -> Vec<(T, usize)> {
        let mut out: Vec<(T, usize)> = Vec::new();
        for x in v {
            match out.iter_mut().find(|(y, _)| y == x) {
                Some(e) => e.1 += 1,
                None => out.push((x.clone(), 1)),
            }
        }
        out
    }
    fn choose(n: usize, k: usize) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }
    let bg = groups(&key.boundaries);
    let ig = groups(&key.interior_marks);
    let mut out = vec![(
        1u128,
        Part { boundaries: vec![], interior_marks: vec![], bare: 0 },
        Part { boundaries: vec![], interior_marks: vec![], bare: 0 },
    )];
    for (b, m) in bg {
        let mut next = Vec::new();
        for (w, l, r) in &out {
            for t in 0..=m {
                let mut l2 = l.boundaries.clone();
                let mut r2 = r.boundaries.clone();
                l2.extend(std::iter::repeat(b.clone()).take(t));
                r2.extend(std::iter::repeat(b.clone()).take(m - t));
                next.push((
                    w * choose(m, t),
                    Part { boundaries: l2, interior_marks: vec![], bare: 0 },
                    Part { boundaries: r2, interior_marks: vec![], bare: 0 },
                ));
            }
        }
        out = next;
    }
    for (d, m) in ig {
        let mut next = Vec::new();
        for (w, l, r) in &out {
            for t in 0..=m {
                let mut l2 = l.interior_marks.clone();
                let mut r2 = r.interior_marks.clone();
                l2.extend(std::iter::repeat(d).take(t));
                r2.extend(std::iter::repeat(d).take(m - t));
                next.push((
                    w * choose(m, t),
                    Part { boundaries: l.boundaries.clone(), interior_marks: l2, bare: 0 },
                    Part { boundaries: r.boundaries.clone(), interior_marks: r2, bare: 0 },
                ));
            }
        }
        out = next;
    }
    let mut fin = Vec::new();
    for (w, l, r) in out {
        // Bare components carry no labels: only how many go each way matters.
        for t in 0..=key.bare_boundaries {
            let left = Part { boundaries: l.boundaries.clone(), interior_marks: l.interior_marks.clone(), bare: t };
            let right = Part {
                boundaries: r.boundaries.clone(),
                interior_marks: r.interior_marks.clone(),
                bare: key.bare_boundaries - t,
            };
            fin.push((w, left, right));
        }
    }
    fin
}

/// Tuning knobs of an [`Engine`].
#[derive(Clone, Copy, Debug)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Whether a root dart may be a semiedge ending in a branch point.
    pub semiedges: bool,
    /// Whether edges may end on the boundary away from a vertex.
    pub halfedges: bool,
    /// Whether boundary edges may appear; without them boundaries are cuts.
    pub boundary_edges: bool,
    /// Largest semiedge count worth tracking; larger counts are dropped.
    pub smax: usize,
    /// Abort once this many states are memoized.
    pub max_states: usize,
}

impl EngineConfig {
    pub fn new(mode: Mode) -> Self {
        EngineConfig { mode, semiedges: true, halfedges: true, boundary_edges: true, smax: 64, max_states: 20_000_000 }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Slot {
    Exact(QuotientKey),
    /// Sum over root degrees `>=` the key's degree.
    Tail(QuotientKey),
}

/// Memoized evaluator for one [`Mode`].
pub struct Engine {
    cfg: EngineConfig,
    memo: HashMap<Slot, Rc<CellTable>>,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Self {
        Engine { cfg, memo: HashMap::new() }
    }

    pub fn config(&self) -> EngineConfig {
        self.cfg
    }

    /// Number of memoized states.
    pub fn states(&self) -> usize {
        self.memo.len()
    }

    /// True once the memo outgrew `max_states`. Results computed after that
    /// point are unreliable and the engine should be dropped.
    pub fn over_budget(&self) -> bool {
        self.memo.len() > self.cfg.max_states
    }

    fn sdim(&self) -> usize {
        self.cfg.smax + 1
    }

    /// Counts of the class described by `key`, split by cells and semiedges.
    pub fn count(&mut self, key: &QuotientKey) -> Rc<CellTable> {
        let mut key = key.clone();
        key.mode = self.cfg.mode;
        key.canonicalize();
        self.exact(key)
    }

    /// Flag-rooted totals over surfaces with capped characteristic `chi_hat`
    /// and `h` boundary components.
    pub fn flag_rooted(&mut self, n: u8, chi_hat: i8, h: u8) -> CellTable {
        let mode = self.cfg.mode;
        let mut out = CellTable::zero(self.sdim());
        for k in 0..=n {
            let t = self.exact(QuotientKey::plain(mode, n, chi_hat, Root::Interior(k), h));
            out.add(&t, 1, 0, 0);
        }
        if h > 0 {
            for k in 0..=n {
                let kk = k as u128;
                for (l, r, w) in [(false, false, kk), (true, false, 2 * kk + 1), (true, true, kk + 1)] {
                    if l && !self.cfg.boundary_edges {
                        continue;
                    }
                    let root = Root::Boundary { k, left: l, right: r };
                    let t = self.exact(QuotientKey::plain(mode, n, chi_hat, root, h - 1));
                    out.add(&t, w, 0, 0);
                }
            }
        }
        out
    }

    fn exact(&mut self, key: QuotientKey) -> Rc<CellTable> {
        let slot = Slot::Exact(key);
        if let Some(v) = self.memo.get(&slot) {
            return v.clone();
        }
        let Slot::Exact(key) = slot else { unreachable!() };
        let v = Rc::new(self.compute(&key));
        self.memo.insert(Slot::Exact(key), v.clone());
        v
    }

    /// Sum of `exact` over root degrees from the key's degree upward.
    fn tail(&mut self, key: QuotientKey) -> Rc<CellTable> {
        if key.root.degree() as u32 + key.mark_degree() > key.n as u32 {
            return Rc::new(CellTable::zero(self.sdim()));
        }
        let slot = Slot::Tail(key);
        if let Some(v) = self.memo.get(&slot) {
            return v.clone();
        }
        let Slot::Tail(key) = slot else { unreachable!() };
        let mut acc = (*self.exact(key.clone())).clone();
        let mut next = key.clone();
        next.root = key.root.with_degree(key.root.degree() + 1);
        acc.add(&self.tail(next), 1, 0, 0);
        let v = Rc::new(acc);
        self.memo.insert(Slot::Tail(key), v.clone());
        v
    }

    fn sides(&self) -> Vec<(bool, bool)> {
        if self.cfg.boundary_edges {
            vec![(false, false), (false, true), (true, false), (true, true)]
        } else {
            vec![(false, false)]
        }
    }

    fn feasible(&self, key: &QuotientKey) -> bool {
        let n = key.n as i32;
        let chi = key.chi_hat as i32;
        if chi > 2 || chi < 2 - n / 2 {
            return false;
        }
        if self.cfg.mode == Mode::Orientable && chi % 2 != 0 {
            return false;
        }
        key.root.degree() as u32 + key.mark_degree() <= key.n as u32
    }

    fn compute(&mut self, key: &QuotientKey) -> CellTable {
        let sd = self.sdim();
        // Past the budget every answer is junk; callers check `over_budget`.
        if !self.feasible(key) || self.over_budget() {
            return CellTable::zero(sd);
        }
        let bare = key.root_marks.is_empty()
            && key.boundaries.is_empty()
            && key.bare_boundaries == 0
            && key.interior_marks.is_empty();
        match key.root {
            Root::Flag => panic!("flag-rooted keys are not engine states"),
            Root::Interior(0) => {
                if key.n == 0 && key.chi_hat == 2 && bare {
                    CellTable::unit(2, sd)
                } else {
                    CellTable::zero(sd)
                }
            }
            Root::Boundary { k: 0, left: false, right: false } => {
                if key.n == 0 && key.chi_hat == 2 && bare {
                    CellTable::unit(0, sd)
                } else {
                    CellTable::zero(sd)
                }
            }
            Root::Boundary { k: 0, left: false, right: true } => {
                let mut m = key.clone();
                m.root = Root::Boundary { k: 0, left: true, right: false };
                m.root_marks = revflip(&key.root_marks);
                if self.cfg.mode == Mode::Orientable {
                    for b in &mut m.boundaries {
                        *b = revflip(b);
                    }
                }
                m.canonicalize();
                (*self.exact(m)).clone()
            }
            Root::Interior(k) => self.interior(key, k),
            Root::Boundary { k, left: true, right } => self.boundary_edge(key, k, right),
            Root::Boundary { k, left: false, right } => self.boundary_corner(key, k, right),
        }
    }

    fn child(&self, key: &QuotientKey, root: Root, dn: u8, dchi: i8) -> QuotientKey {
        let mut c = key.clone();
        c.root = root;
        c.n = key.n - dn;
        c.chi_hat = key.chi_hat + dchi;
        c
    }

    fn interior(&mut self, key: &QuotientKey, k: u8) -> CellTable {
        let mode = self.cfg.mode;
        let mut out = CellTable::zero(self.sdim());
        let n = key.n;
        if self.cfg.semiedges && n >= 1 {
            let c = self.child(key, Root::Interior(k - 1), 1, 0);
            out.add(&self.exact(c), 1, 0, 1);
        }
        let bnd = |k: u8, (l, r): (bool, bool)| Root::Boundary { k, left: l, right: r };
        let sides_all = self.sides();

        // Half edge onto a boundary component.
        if self.cfg.halfedges && n >= 1 {
            if key.bare_boundaries > 0 {
                let mut c = self.child(key, bnd(k - 1, (false, false)), 1, 0);
                c.bare_boundaries -= 1;
                out.add(&self.exact(c), 1, 1, 0);
            }
            for ci in 0..key.boundaries.len() {
                for u in gap_readings(&key.boundaries[ci], mode) {
                    let mut c = self.child(key, bnd(k - 1, (false, false)), 1, 0);
                    c.boundaries.remove(ci);
                    c.root_marks = u;
                    out.add(&self.exact(c), 1, 1, 0);
                }
            }
        }
        if n < 2 {
            return out;
        }

        // Edge to an unmarked interior vertex.
        let c = self.child(key, Root::Interior(k - 1), 2, 0);
        out.add(&self.tail(c), 1, 1, 0);

        // Edge to a marked interior vertex.
        let mut seen = Vec::new();
        for (i, &j) in key.interior_marks.iter().enumerate() {
            if seen.contains(&j) {
                continue;
            }
            seen.push(j);
            let mult = key.interior_marks.iter().filter(|&&x| x == j).count() as u128;
            if k + j < 2 {
                continue;
            }
            let mut c = self.child(key, Root::Interior(k + j - 2), 2, 0);
            c.interior_marks.remove(i);
            out.add(&self.exact(c), mult, 1, 0);
        }

        // Edge to a boundary vertex: the root joins that boundary.
        let hi = n - 2;
        let edge_to = |this: &mut Self, base: &QuotientKey, sides: &[(bool, bool)], out: &mut CellTable| {
            for &lr in sides {
                for kk in (k - 1)..=hi {
                    let mut c = base.clone();
                    c.root = bnd(kk, lr);
                    let t = this.exact(c);
                    out.add(&t, (kk + 2 - k) as u128, 1, 0);
                }
            }
        };
        if key.bare_boundaries > 0 {
            let mut c = self.child(key, Root::Interior(0), 2, 0);
            c.bare_boundaries -= 1;
            edge_to(self, &c, &sides_all, &mut out);
        }
        for ci in 0..key.boundaries.len() {
            let comp = key.boundaries[ci].clone();
            let mut base = self.child(key, Root::Interior(0), 2, 0);
            base.boundaries.remove(ci);
            for u in gap_readings(&comp, mode) {
                let mut c = base.clone();
                c.root_marks = u;
                edge_to(self, &c, &sides_all, &mut out);
            }
            for (m, u) in mark_readings(&comp, mode) {
                let mut c = base.clone();
                c.root_marks = u;
                edge_to(self, &c, &[(m.left, m.right)], &mut out);
            }
        }

        // Loops at the root.
        let twosided = if mode == Mode::Combined { 2 } else { 1 };
        for j in 1..k {
            self.split_pair(
                key,
                &mut out,
                (Root::Interior(j - 1), &[], false),
                (Root::Interior(k - 1 - j), &[], false),
                -1,
            );
            let deg = k - 1 - j;
            if deg > 0 {
                let mut c = self.child(key, Root::Interior(j - 1), 2, 2);
                c.interior_marks.push(deg);
                c.canonicalize();
                out.add(&self.exact(c), deg as u128 * twosided, -1, 0);
            }
        }
        if mode == Mode::Combined && k >= 2 {
            let c = self.child(key, Root::Interior(k - 2), 2, 1);
            out.add(&self.exact(c), (k - 1) as u128, 0, 0);
        }
        out
    }

    /// A separating cut into two pieces with the given roots and root marks;
    /// everything else is distributed.  A `tail` piece is summed over all
    /// root degrees from the given one upward.
    #[allow(clippy::too_many_arguments)]
    fn split_pair(
        &mut self,
        key: &QuotientKey,
        out: &mut CellTable,
        (first, first_marks, first_tail): (Root, &[Mark], bool),
        (second, second_marks, second_tail): (Root, &[Mark], bool),
        dc: i32,
    ) {
        let mode = self.cfg.mode;
        let budget = key.n as i32 - 2;
        let chi_total = key.chi_hat as i32 + 2;
        for (w, l, r) in splits(key) {
            for n1 in 0..=budget {
                let n2 = budget - n1;
                for chi1 in (chi_total - 2)..=2 {
                    let chi2 = chi_total - chi1;
                    let mut a = QuotientKey {
                        mode,
                        n: n1 as u8,
                        chi_hat: chi1 as i8,
                        root: first,
                        root_marks: first_marks.to_vec(),
                        boundaries: l.boundaries.clone(),
                        bare_boundaries: l.bare,
                        interior_marks: l.interior_marks.clone(),
                    };
                    let mut b = QuotientKey {
                        mode,
                        n: n2 as u8,
                        chi_hat: chi2 as i8,
                        root: second,
                        root_marks: second_marks.to_vec(),
                        boundaries: r.boundaries.clone(),
                        bare_boundaries: r.bare,
                        interior_marks: r.interior_marks.clone(),
                    };
                    a.canonicalize();
                    b.canonicalize();
                    if !self.feasible(&a) || !self.feasible(&b) {
                        continue;
                    }
                    let ta = if first_tail { self.tail(a) } else { self.exact(a) };
                    if ta.is_zero() {
                        continue;
                    }
                    let tb = if second_tail { self.tail(b) } else { self.exact(b) };
                    out.add(&ta.mul(&tb), w, dc, 0);
                }
            }
        }
    }

    /// Root with a boundary edge on its left.
    fn boundary_edge(&mut self, key: &QuotientKey, k: u8, right: bool) -> CellTable {
        let mut out = CellTable::zero(self.sdim());
        if key.n == 0 {
            return out;
        }
        if right && key.root_marks.is_empty() {
            let c = self.child(key, Root::Interior(k), 1, 0);
            out.add(&self.exact(c), 1, -1, 0);
        }
        // Contract the boundary edge into the left neighbour.
        for ly in [false, true] {
            let c = self.child(key, Root::Boundary { k, left: ly, right }, 1, 0);
            out.add(&self.tail(c), 1, 0, 0);
        }
        if let Some(&last) = key.root_marks.last() {
            if last.right {
                let mut c = self.child(key, Root::Boundary { k, left: last.left, right }, 1, 0);
                c.root_marks.pop();
                out.add(&self.tail(c), 1, 0, 0);
            }
        }
        out
    }

    /// Root with a cut corner on its left; the root dart is the leftmost one.
    fn boundary_corner(&mut self, key: &QuotientKey, k: u8, right: bool) -> CellTable {
        let mode = self.cfg.mode;
        let mut out = CellTable::zero(self.sdim());
        let n = key.n;
        let bnd = |k: u8, l: bool, r: bool| Root::Boundary { k, left: l, right: r };
        if n == 0 {
            return out;
        }
        let c = self.child(key, bnd(k - 1, false, right), 1, 0);
        let t = self.exact(c);
        if self.cfg.semiedges {
            out.add(&t, 1, 0, 1);
        }
        if self.cfg.halfedges {
            out.add(&t, 1, 0, 0);
        }
        if n < 2 {
            return out;
        }

        // Edge into the interior.
        let c = self.child(key, bnd(k - 1, false, right), 2, 0);
        out.add(&self.tail(c), 1, 1, 0);
        let mut seen = Vec::new();
        for (i, &j) in key.interior_marks.iter().enumerate() {
            if seen.contains(&j) {
                continue;
            }
            seen.push(j);
            let mult = key.interior_marks.iter().filter(|&&x| x == j).count() as u128;
            if k + j < 2 {
                continue;
            }
            let mut c = self.child(key, bnd(k + j - 2, false, right), 2, 0);
            c.interior_marks.remove(i);
            out.add(&self.exact(c), mult, 1, 0);
        }

        // Loops back to the root.
        let twosided = if mode == Mode::Combined { 2 } else { 1 };
        for q in 2..=k {
            self.split_pair(
                key,
                &mut out,
                (bnd(k - q, false, right), &key.root_marks, false),
                (Root::Interior(q - 2), &[], false),
                -1,
            );
            if q > 2 {
                let mut c = self.child(key, bnd(k - q, false, right), 2, 2);
                c.interior_marks.push(q - 2);
                c.canonicalize();
                out.add(&self.exact(c), (q - 2) as u128 * twosided, -1, 0);
            }
        }
        if mode == Mode::Combined && k >= 2 {
            let c = self.child(key, bnd(k - 2, false, right), 2, 1);
            out.add(&self.exact(c), (k - 1) as u128, 0, 0);
        }

        // Chords to another boundary vertex.
        let b0 = key.root_marks.clone();
        let r = b0.len();
        // Where the far end lands on the root's own component: a gap (free
        // sides) or a mark (fixed sides), with the marks before and after it.
        let mut targets: Vec<(Option<Mark>, Vec<Mark>, Vec<Mark>)> = Vec::new();
        for i in 0..=r {
            targets.push((None, b0[..i].to_vec(), b0[i..].to_vec()));
        }
        for i in 0..r {
            targets.push((Some(b0[i]), b0[..i].to_vec(), b0[i + 1..].to_vec()));
        }
        let all_sides = self.sides();
        for (m, u1, u2) in &targets {
            let sides: Vec<(bool, bool)> = match m {
                None => all_sides.clone(),
                Some(m) => vec![(m.left, m.right)],
            };
            for &(ly, ry) in &sides {
                self.split_pair(
                    key,
                    &mut out,
                    (bnd(k - 1, ly, right), u1, true),
                    (bnd(0, false, ry), u2, true),
                    0,
                );

                let mut c = self.child(key, bnd(k - 1, ly, right), 2, 2);
                c.root_marks = u1.clone();
                let mut nb = vec![Mark::new(false, ry)];
                nb.extend(u2.iter().copied());
                // An unrooted component forgets its direction; when both
                // directions read the same labelled marks, two gluings
                // give the same child.
                let w = if mode == Mode::Combined && nb.len() <= 2 && nb.iter().all(|m| m.left == m.right) {
                    2
                } else {
                    1
                };
                c.boundaries.push(nb);
                c.canonicalize();
                out.add(&self.tail(c), w, 0, 0);
            }
            if mode == Mode::Combined {
                // The chord passes through a cross-cap: the far side of the
                // component is reversed.
                let twisted: Vec<(bool, bool)> = match m {
                    None => all_sides.clone(),
                    Some(m) => vec![(m.right, m.left)],
                };
                for &(ly, ry) in &twisted {
                    let mut c = self.child(key, bnd(k - 1, ly, right), 2, 1);
                    let mut rm = u1.clone();
                    rm.push(Mark::new(ry, false));
                    rm.extend(revflip(u2));
                    c.root_marks = rm;
                    out.add(&self.tail(c), 1, 0, 0);
                }
            }
        }

        // Chords to a different boundary component.
        let join = |this: &mut Self, base: QuotientKey, sides: &[(bool, bool)], u: &[Mark], out: &mut CellTable| {
            for &(ly, ry) in sides {
                let mut c = base.clone();
                c.root = bnd(k - 1, ly, right);
                let mut rm = b0.clone();
                rm.push(Mark::new(false, ry));
                rm.extend_from_slice(u);
                c.root_marks = rm;
                out.add(&this.tail(c), 1, 0, 0);
            }
        };
        if key.bare_boundaries > 0 {
            let mut base = self.child(key, Root::Interior(0), 2, 0);
            base.bare_boundaries -= 1;
            join(self, base, &all_sides, &[], &mut out);
        }
        for ci in 0..key.boundaries.len() {
            let comp = key.boundaries[ci].clone();
            let mut base = self.child(key, Root::Interior(0), 2, 0);
            base.boundaries.remove(ci);
            for u in gap_readings(&comp, mode) {
                join(self, base.clone(), &all_sides, &u, &mut out);
            }
            for (m, u) in mark_readings(&comp, mode) {
                join(self, base.clone(), &[(m.left, m.right)], &u, &mut out);
            }
        }
        out
    }
}
