//! Exhaustive enumeration of small maps in the flag model.
//!
//! A map with `N` flags is three involutions `r0, r1, r2` on the flags.
//! Vertices are orbits of `<r1, r2>`, edges of `<r0, r2>`, faces of
//! `<r0, r1>`. Closed maps have fixed-point-free involutions and `r0 r2`
//! fixed-point free, so every edge owns four flags. Quotient maps relax
//! this: a fixed point of `r1` is a boundary side, a flag with `r0 = r2` lies
//! on a semiedge, and fixed points of `r0` or `r2` mark halfedges and
//! boundary edges.
//!
//! Classes are found by a complete (not necessarily unique) generator and
//! deduplicated by canonical form, so rooted counts are orbit sums
//! `Σ_f 1/|Aut|` and never depend on how often the generator revisits a
//! class.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::OrbimapError;
use crate::orbifold_census::SurfaceClass;

/// Largest closed-map size the oracle accepts.
pub const MAX_EDGES: u64 = 4;
/// Largest quotient size the bordered oracle accepts.
pub const MAX_BORDERED_DARTS: u64 = 6;

const UNSET: u8 = u8::MAX;

/// Three involutions on `0..N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagSystem {
    pub r: [Vec<u8>; 3],
}

impl FlagSystem {
    pub fn flag_count(&self) -> usize {
        self.r[0].len()
    }

    fn orbits(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        let n = self.flag_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for f in 0..n {
            if seen[f] {
                continue;
            }
            seen[f] = true;
            let mut orbit = vec![f];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in [a, b] {
                    let y = self.r[g][x] as usize;
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            out.push(orbit);
        }
        out
    }

    fn fixed(&self, i: usize) -> usize {
        (0..self.flag_count()).filter(|&x| self.r[i][x] as usize == x).count()
    }

    /// Whether every involution is fixed-point free and edges have four flags.
    pub fn is_closed(&self) -> bool {
        (0..self.flag_count()).all(|x| {
            let a = self.r[0][x] as usize;
            let b = self.r[2][x] as usize;
            a != x && b != x && self.r[1][x] as usize != x && self.r[0][b] as usize != x
        })
    }

    pub fn is_connected(&self) -> bool {
        let n = self.flag_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for g in 0..3 {
                let y = self.r[g][x] as usize;
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// Two-colouring of the flags along non-trivial moves, if one exists.
    pub fn orientation(&self) -> Option<Vec<u8>> {
        let n = self.flag_count();
        let mut col = vec![UNSET; n];
        col[0] = 0;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for g in 0..3 {
                let y = self.r[g][x] as usize;
                if y == x {
                    continue;
                }
                if col[y] == UNSET {
                    col[y] = 1 - col[x];
                    stack.push(y);
                } else if col[y] == col[x] {
                    return None;
                }
            }
        }
        Some(col)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// Euler characteristic of the underlying (possibly bordered) surface.
    ///
    /// Counted on the flag triangulation: its vertices are map vertices,
    /// edge midpoints, face centres and the extra corners created where a
    /// triangle side lies on the boundary.
    pub fn euler_characteristic(&self) -> i64 {
        let n = self.flag_count() as i64;
        let v = self.orbits(1, 2).len() as i64;
        let e = self.orbits(0, 2).len() as i64;
        let f = self.orbits(0, 1).len() as i64;
        let sides: i64 = (0..3).map(|i| (n + self.fixed(i) as i64) / 2).sum();
        v + e + f - sides + n
    }

    /// Number of boundary components.
    pub fn boundary_components(&self) -> usize {
        let n = self.flag_count();
        let mut parent: Vec<usize> = (0..3 * n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut nodes = Vec::new();
        for x in 0..n {
            for i in 0..3 {
                if self.r[i][x] as usize == x {
                    nodes.push((x, i));
                }
            }
        }
        // Boundary sides meeting at a triangle corner are glued by walking
        // around that corner.
        for &(x, i) in &nodes {
            for p in 0..3 {
                if p == i {
                    continue;
                }
                let j = 3 - p - i;
                let (mut cur, mut g) = (x, j);
                loop {
                    let y = self.r[g][cur] as usize;
                    if y == cur {
                        break;
                    }
                    cur = y;
                    g = if g == j { i } else { j };
                }
                let a = find(&mut parent, x * 3 + i);
                let b = find(&mut parent, cur * 3 + g);
                parent[a] = b;
            }
        }
        let roots: HashSet<usize> = nodes.iter().map(|&(x, i)| find(&mut parent, x * 3 + i)).collect();
        roots.len()
    }

    /// Dangling semiedges: flag pairs swapped by both `r0` and `r2`.
    pub fn semiedges(&self) -> usize {
        (0..self.flag_count())
            .filter(|&x| {
                let a = self.r[0][x] as usize;
                a != x && self.r[2][x] as usize == a && x < a
            })
            .count()
    }

    /// Interior vertices plus interior faces: orbits untouched by boundary.
    pub fn interior_cells(&self) -> usize {
        let closed = |o: &Vec<usize>, a: usize, b: usize| o.iter().all(|&x| self.r[a][x] as usize != x && self.r[b][x] as usize != x);
        let v = self.orbits(1, 2).iter().filter(|o| closed(o, 1, 2)).count();
        let f = self.orbits(0, 1).iter().filter(|o| closed(o, 0, 1)).count();
        v + f
    }

    /// Relabels flags in traversal order from `root`.
    fn relabel(&self, root: usize) -> Vec<u8> {
        let n = self.flag_count();
        let mut label = vec![UNSET; n];
        let mut order = Vec::with_capacity(n);
        label[root] = 0;
        order.push(root);
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            let a = self.r[0][x] as usize;
            let b = self.r[2][x] as usize;
            for y in [a, b, self.r[0][b] as usize, self.r[1][x] as usize] {
                if label[y] == UNSET {
                    label[y] = order.len() as u8;
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut out = Vec::with_capacity(3 * n);
        for g in 0..3 {
            out.extend(order.iter().map(|&x| label[self.r[g][x] as usize]));
        }
        out
    }

    fn from_code(code: &[u8]) -> FlagSystem {
        let n = code.len() / 3;
        FlagSystem { r: [code[..n].to_vec(), code[n..2 * n].to_vec(), code[2 * n..].to_vec()] }
    }

    /// The canonical relabelling, the number of automorphisms, and whether
    /// some automorphism reverses the orientation colouring.
    pub fn canonical(&self) -> (FlagSystem, usize, bool) {
        let codes: Vec<Vec<u8>> = (0..self.flag_count()).map(|f| self.relabel(f)).collect();
        let best = codes.iter().min().expect("flag systems are nonempty");
        let hits: Vec<usize> = (0..codes.len()).filter(|&f| &codes[f] == best).collect();
        let reflexible = match self.orientation() {
            Some(col) => hits.iter().any(|&f| col[f] != col[hits[0]]),
            None => true,
        };
        (FlagSystem::from_code(best), hits.len(), reflexible)
    }
}

/// Depth-first generator reaching every connected flag system on `n`
/// flags, labelled in traversal order from flag 0.
struct Generator {
    n: usize,
    closed: bool,
    r: [Vec<u8>; 3],
    next: usize,
}

impl Generator {
    fn open(&self, g: usize, skip: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.next).filter(|&x| self.r[g][x] == UNSET && !skip.contains(&x)).collect();
        if self.next < self.n {
            out.push(self.next);
        }
        out
    }

    fn take(&mut self, x: usize) -> usize {
        let saved = self.next;
        if x == self.next {
            self.next += 1;
        }
        saved
    }

    fn set(&mut self, g: usize, pairs: &[(usize, usize)]) {
        for &(x, y) in pairs {
            self.r[g][x] = y as u8;
            self.r[g][y] = x as u8;
        }
    }

    fn clear(&mut self, flags: &[usize]) {
        for &x in flags {
            self.r[0][x] = UNSET;
            self.r[2][x] = UNSET;
        }
    }

    fn run(&mut self, cur: usize, emit: &mut dyn FnMut(&FlagSystem)) {
        if cur == self.next {
            if self.next == self.n {
                emit(&FlagSystem { r: self.r.clone() });
            }
            return;
        }
        if self.r[0][cur] == UNSET {
            self.edge(cur, emit);
        } else if self.r[1][cur] == UNSET {
            let mut opts = self.open(1, &[cur]);
            if !self.closed {
                opts.insert(0, cur);
            }
            for a in opts {
                let saved = self.take(a);
                self.set(1, &[(cur, a)]);
                self.run(cur + 1, emit);
                self.r[1][cur] = UNSET;
                self.r[1][a] = UNSET;
                self.next = saved;
            }
        } else {
            self.run(cur + 1, emit);
        }
    }

    /// Chooses `r0(cur)`, `r2(cur)` and the rest of cur's edge.
    fn edge(&mut self, cur: usize, emit: &mut dyn FnMut(&FlagSystem)) {
        let a_opts = {
            let mut v = self.open(0, &[cur]);
            if !self.closed {
                v.insert(0, cur);
            }
            v
        };
        for a in a_opts {
            let s1 = self.take(a);
            let b_opts = {
                let mut v = self.open(0, &[cur, a]);
                if !self.closed && a != cur {
                    v.insert(0, a);
                    v.insert(0, cur);
                }
                v
            };
            for b in b_opts {
                let s2 = self.take(b);
                if a == cur {
                    // r0 fixes cur: a two-flag edge along r2
                    self.set(0, &[(cur, cur), (b, b)]);
                    self.set(2, &[(cur, b)]);
                    self.run(cur, emit);
                    self.clear(&[cur, b]);
                } else if b == cur {
                    self.set(0, &[(cur, a)]);
                    self.set(2, &[(cur, cur), (a, a)]);
                    self.run(cur, emit);
                    self.clear(&[cur, a]);
                } else if b == a {
                    self.set(0, &[(cur, a)]);
                    self.set(2, &[(cur, a)]);
                    self.run(cur, emit);
                    self.clear(&[cur, a]);
                } else {
                    for c in self.open(0, &[cur, a, b]) {
                        let s3 = self.take(c);
                        self.set(0, &[(cur, a), (b, c)]);
                        self.set(2, &[(cur, b), (a, c)]);
                        self.run(cur, emit);
                        self.clear(&[cur, a, b, c]);
                        self.next = s3;
                    }
                }
                self.next = s2;
            }
            self.next = s1;
        }
    }
}

/// One isomorphism class of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub system: FlagSystem,
    pub automorphisms: usize,
    /// Has an orientation-reversing automorphism (always true when
    /// non-orientable).
    pub reflexible: bool,
}

impl MapClass {
    /// The closed surface carrying a closed map.
    pub fn surface(&self) -> SurfaceClass {
        let chi = self.system.euler_characteristic();
        if self.system.is_orientable() {
            SurfaceClass::orientable(((2 - chi) / 2) as u32)
        } else {
            SurfaceClass::non_orientable((2 - chi) as u32)
        }
    }
}

/// All classes on `n_flags` flags, closed maps only or all quotient maps.
pub fn enumerate_classes(n_flags: usize, closed: bool) -> Vec<MapClass> {
    assert!(n_flags >= 1 && n_flags < UNSET as usize);
    let mut gen = Generator { n: n_flags, closed, r: [vec![UNSET; n_flags], vec![UNSET; n_flags], vec![UNSET; n_flags]], next: 1 };
    let mut seen: BTreeMap<FlagSystem, MapClass> = BTreeMap::new();
    gen.run(0, &mut |s| {
        let (system, automorphisms, reflexible) = s.canonical();
        seen.entry(system.clone()).or_insert(MapClass { system, automorphisms, reflexible });
    });
    seen.into_values().collect()
}

fn check_edges(n_edges: u64) -> Result<(), OrbimapError> {
    if n_edges == 0 {
        return Err(OrbimapError::Invalid("maps need at least one edge".into()));
    }
    if n_edges > MAX_EDGES {
        return Err(OrbimapError::SizeLimit(format!("the oracle stops at {MAX_EDGES} edges, asked for {n_edges}")));
    }
    Ok(())
}

/// Every closed map with `n_edges` edges, one canonical representative each.
pub fn enumerate_maps(n_edges: u64) -> Result<Vec<MapClass>, OrbimapError> {
    check_edges(n_edges)?;
    Ok(enumerate_classes(4 * n_edges as usize, true))
}

/// Maps on `surface` up to all homeomorphisms.
pub fn oracle_unsensed(surface: SurfaceClass, n_edges: u64) -> Result<BigUint, OrbimapError> {
    let maps = enumerate_maps(n_edges)?;
    Ok(BigUint::from(maps.iter().filter(|m| m.surface() == surface).count()))
}

/// Maps on an orientable `surface` up to orientation-preserving
/// homeomorphisms; chiral classes count twice.
pub fn oracle_sensed(surface: SurfaceClass, n_edges: u64) -> Result<BigUint, OrbimapError> {
    if !surface.orientable {
        return Err(OrbimapError::Invalid("sensed counts need an orientable surface".into()));
    }
    let maps = enumerate_maps(n_edges)?;
    let n: usize = maps.iter().filter(|m| m.surface() == surface).map(|m| if m.reflexible { 1 } else { 2 }).sum();
    Ok(BigUint::from(n))
}

/// A bordered surface, by orientability, Euler characteristic and number of
/// boundary components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BorderedSurface {
    pub orientable: bool,
    pub chi: i64,
    pub boundaries: usize,
}

impl BorderedSurface {
    pub const DISK: BorderedSurface = BorderedSurface { orientable: true, chi: 1, boundaries: 1 };
    pub const MOEBIUS: BorderedSurface = BorderedSurface { orientable: false, chi: 0, boundaries: 1 };
    pub const ANNULUS: BorderedSurface = BorderedSurface { orientable: true, chi: 0, boundaries: 2 };
}

/// Rooted quotient maps sharing a surface and root type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedClass {
    pub surface: BorderedSurface,
    /// The root flag's vertex touches the boundary.
    pub root_on_boundary: bool,
    /// Half the flags around the root vertex.
    pub root_degree: usize,
    pub cells: usize,
    pub semiedges: usize,
}

/// Flag-rooted quotient maps with `n_darts` darts, grouped by surface, root
/// type, interior cells and semiedges.
pub fn rooted_quotient_census(n_darts: u64) -> Result<BTreeMap<RootedClass, BigUint>, OrbimapError> {
    if n_darts == 0 || n_darts > MAX_BORDERED_DARTS {
        return Err(OrbimapError::SizeLimit(format!("the bordered oracle covers 1..={MAX_BORDERED_DARTS} darts")));
    }
    let mut out: BTreeMap<RootedClass, BigUint> = BTreeMap::new();
    for class in enumerate_classes(2 * n_darts as usize, false) {
        let s = &class.system;
        let surface = BorderedSurface {
            orientable: s.is_orientable(),
            chi: s.euler_characteristic(),
            boundaries: s.boundary_components(),
        };
        let (cells, semiedges) = (s.interior_cells(), s.semiedges());
        let mut flags: BTreeMap<RootedClass, usize> = BTreeMap::new();
        for v in s.orbits(1, 2) {
            let on_boundary = v.iter().any(|&x| s.r[1][x] as usize == x || s.r[2][x] as usize == x);
            let key = RootedClass { surface, root_on_boundary: on_boundary, root_degree: v.len() / 2, cells, semiedges };
            *flags.entry(key).or_default() += v.len();
        }
        // automorphisms act freely on flags and preserve the root type
        for (key, f) in flags {
            if f % class.automorphisms != 0 {
                return Err(OrbimapError::Invariant(format!("{f} root flags not divisible by {} automorphisms", class.automorphisms)));
            }
            *out.entry(key).or_default() += f / class.automorphisms;
        }
    }
    Ok(out)
}

/// Flag-rooted quotient maps on a bordered surface with `n_darts` darts and
/// no semiedges, optionally restricted by root position and degree.
pub fn oracle_bordered(
    surface: BorderedSurface,
    n_darts: u64,
    root_on_boundary: Option<bool>,
    root_degree: Option<usize>,
) -> Result<BigUint, OrbimapError> {
    let census = rooted_quotient_census(n_darts)?;
    Ok(census
        .into_iter()
        .filter(|(k, _)| {
            k.surface == surface
                && k.semiedges == 0
                && root_on_boundary.map_or(true, |b| b == k.root_on_boundary)
                && root_degree.map_or(true, |d| d == k.root_degree)
        })
        .map(|(_, v)| v)
        .sum())
}

/// One line of the golden file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub n_edges: u64,
    pub surface: SurfaceClass,
    pub unsensed: String,
    /// Absent for non-orientable surfaces.
    pub sensed: Option<String>,
}

/// Oracle counts for every surface carrying maps with up to `max_edges`
/// edges.
pub fn golden_records(max_edges: u64) -> Result<Vec<GoldenRecord>, OrbimapError> {
    check_edges(max_edges)?;
    let mut out = Vec::new();
    for n in 1..=max_edges {
        let mut by_surface: BTreeMap<SurfaceClass, (usize, usize)> = BTreeMap::new();
        for m in enumerate_maps(n)? {
            let e = by_surface.entry(m.surface()).or_default();
            e.0 += 1;
            e.1 += if m.reflexible { 1 } else { 2 };
        }
        for (surface, (unsensed, sensed)) in by_surface {
            out.push(GoldenRecord {
                n_edges: n,
                surface,
                unsensed: unsensed.to_string(),
                sensed: surface.orientable.then(|| sensed.to_string()),
            });
        }
    }
    Ok(out)
}

/// Writes records as JSON lines.
pub fn write_golden(records: &[GoldenRecord], mut w: impl Write) -> Result<(), OrbimapError> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| OrbimapError::Invalid(e.to_string()))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parses JSON lines written by [`write_golden`].
pub fn read_golden(text: &str) -> Result<Vec<GoldenRecord>, OrbimapError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| OrbimapError::Invalid(format!("golden line {l:?}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_edge() {
        let maps = enumerate_maps(1).unwrap();
        let sphere = maps.iter().filter(|m| m.surface() == SurfaceClass::orientable(0)).count();
        let proj = maps.iter().filter(|m| m.surface() == SurfaceClass::non_orientable(1)).count();
        assert_eq!((sphere, proj, maps.len()), (2, 1, 3));
        assert_eq!(oracle_unsensed(SurfaceClass::orientable(1), 1).unwrap(), BigUint::from(0u32));
        assert_eq!(oracle_sensed(SurfaceClass::orientable(0), 1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn two_edges() {
        assert_eq!(oracle_unsensed(SurfaceClass::orientable(0), 2).unwrap(), BigUint::from(4u32));
        assert_eq!(oracle_unsensed(SurfaceClass::non_orientable(2), 2).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn size_limit() {
        assert!(matches!(enumerate_maps(5), Err(OrbimapError::SizeLimit(_))));
        assert!(matches!(rooted_quotient_census(7), Err(OrbimapError::SizeLimit(_))));
    }

    #[test]
    fn one_dart_disk() {
        // two maps rooted on the boundary, two with an interior vertex
        assert_eq!(oracle_bordered(BorderedSurface::DISK, 1, None, None).unwrap(), BigUint::from(4u32));
        assert_eq!(oracle_bordered(BorderedSurface::DISK, 1, Some(false), None).unwrap(), BigUint::from(1u32));
    }
}
