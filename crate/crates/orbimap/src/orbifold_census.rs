//! Cyclic orbifold signatures and Table-1 style census rows.
//!
//! A quotient of a surface of Euler characteristic `χ` by a cyclic group of
//! order `l` is an orbifold `O(𝔤; h; [m_1, ..., m_r])` constrained by the
//! Riemann–Hurwitz relation `-χ = l (α𝔤 - 2 + h + Σ (1 - 1/m_i))`, with
//! `α = 2` for orientable and `α = 1` for non-orientable quotients.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::epimorphisms::{epi_count, EpiQuery};
use crate::numtheory::divisors;

/// A closed surface: orientable genus counts handles, non-orientable genus
/// counts crosscaps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub orientable: bool,
    pub genus: u32,
}

impl SurfaceClass {
    pub fn orientable(genus: u32) -> Self {
        SurfaceClass { orientable: true, genus }
    }

    /// Panics for genus 0, which has no non-orientable surface.
    pub fn non_orientable(genus: u32) -> Self {
        assert!(genus >= 1, "non-orientable surfaces have genus >= 1");
        SurfaceClass { orientable: false, genus }
    }

    pub fn euler_characteristic(&self) -> i64 {
        if self.orientable {
            2 - 2 * self.genus as i64
        } else {
            2 - self.genus as i64
        }
    }

    pub fn is_valid(&self) -> bool {
        self.orientable || self.genus >= 1
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.orientable { "orientable" } else { "non-orientable" };
        write!(f, "{tag} genus {}", self.genus)
    }
}

/// The quotient type `O(𝔤; h; [m_1, ..., m_r])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbifoldSignature {
    pub orientable: bool,
    pub genus: u32,
    pub boundaries: u32,
    /// Sorted ascending, every entry at least 2.
    pub branch_indices: Vec<u64>,
}

impl OrbifoldSignature {
    pub fn new(orientable: bool, genus: u32, boundaries: u32, mut branch_indices: Vec<u64>) -> Self {
        branch_indices.sort_unstable();
        let sig = OrbifoldSignature { orientable, genus, boundaries, branch_indices };
        assert!(sig.is_valid(), "invalid orbifold signature {sig}");
        sig
    }

    pub fn is_valid(&self) -> bool {
        (self.orientable || self.genus >= 1)
            && self.branch_indices.iter().all(|&m| m >= 2)
            && self.branch_indices.windows(2).all(|w| w[0] <= w[1])
    }

    /// Euler characteristic of the underlying bordered surface.
    pub fn surface_chi(&self) -> i64 {
        let g = self.genus as i64;
        let h = self.boundaries as i64;
        if self.orientable {
            2 - 2 * g - h
        } else {
            2 - g - h
        }
    }

    /// Closed orientable orbifolds arise exactly from orientation-preserving
    /// actions on orientable coverings.
    pub fn is_closed_orientable(&self) -> bool {
        self.orientable && self.boundaries == 0
    }

    fn alpha(&self) -> i64 {
        if self.orientable {
            2
        } else {
            1
        }
    }

    fn order_key(&self) -> (i64, &[u64], bool, u32) {
        (-self.surface_chi(), &self.branch_indices, !self.orientable, self.boundaries)
    }
}

impl Ord for OrbifoldSignature {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key()).then(self.genus.cmp(&other.genus))
    }
}

impl PartialOrd for OrbifoldSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.orientable { '+' } else { '-' };
        let idx: Vec<String> = self.branch_indices.iter().map(|m| m.to_string()).collect();
        write!(f, "O{sign}(g={}; h={}; [{}])", self.genus, self.boundaries, idx.join(" "))
    }
}

/// One census row: an orbifold covered by a surface of Euler characteristic
/// `covering_chi` under a cyclic group of order `l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub covering_chi: i64,
    pub l: u64,
    pub signature: OrbifoldSignature,
    pub epi: BigUint,
    pub epi_plus: BigUint,
}

/// Exact check of the Riemann–Hurwitz relation.
pub fn riemann_hurwitz_holds(covering_chi: i64, l: u64, sig: &OrbifoldSignature) -> bool {
    // Multiply the bracket by M = lcm of the branch indices to stay integral.
    let m_lcm = crate::numtheory::lcm_list(&sig.branch_indices) as i128;
    let r = sig.branch_indices.len() as i128;
    let base = sig.alpha() as i128 * sig.genus as i128 - 2 + sig.boundaries as i128 + r;
    let frac: i128 = sig.branch_indices.iter().map(|&m| m_lcm / m as i128).sum();
    let bracket_times_m = base * m_lcm - frac;
    -(covering_chi as i128) * m_lcm == l as i128 * bracket_times_m
}

/// Largest period worth considering for a covering surface.
///
/// The assembly does not rely on this bound; it sums over every divisor of
/// `2n`, which is always a superset.
pub fn period_bound(surface: SurfaceClass, n_edges: u64) -> u64 {
    let g = surface.genus as u64;
    match (surface.orientable, g) {
        (true, 0) | (true, 1) | (false, 1) | (false, 2) => 2 * n_edges,
        (true, _) if g % 2 == 0 => 4 * g + 4,
        (true, _) => 4 * g - 4,
        (false, _) if g % 2 == 0 => 2 * g - 2,
        (false, _) => 2 * g,
    }
}

/// All signatures satisfying Riemann–Hurwitz for `(covering_chi, l)` whose
/// branch indices divide `l`, in canonical order. Bordered signatures are
/// only produced for even `l`.
pub fn generate_signatures(covering_chi: i64, l: u64) -> Vec<OrbifoldSignature> {
    assert!(l >= 1);
    // Scaled by l: l α 𝔤 + l h + Σ (l - l/m_i) = 2l - χ.
    let total = 2 * l as i64 - covering_chi;
    let mut out = Vec::new();
    if total < 0 {
        return out;
    }
    let li = l as i64;
    let branch_choices: Vec<u64> = divisors(l).into_iter().filter(|&m| m >= 2).collect();
    for orientable in [true, false] {
        let alpha = if orientable { 2 } else { 1 };
        let g_min = if orientable { 0 } else { 1 };
        let mut g = g_min;
        while alpha * li * g <= total {
            let mut h = 0;
            // Boundary reflections need an element of order two.
            while alpha * li * g + li * h <= total && (h == 0 || l % 2 == 0) {
                let rest = total - alpha * li * g - li * h;
                let mut current = Vec::new();
                collect_branches(&branch_choices, 0, rest, li, &mut current, &mut |ms| {
                    out.push(OrbifoldSignature::new(orientable, g as u32, h as u32, ms.to_vec()));
                });
                h += 1;
            }
            g += 1;
        }
    }
    out.sort();
    out
}

fn collect_branches(
    choices: &[u64],
    start: usize,
    rest: i64,
    l: i64,
    current: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if rest == 0 {
        emit(current);
        return;
    }
    for i in start..choices.len() {
        let m = choices[i] as i64;
        let cost = l - l / m;
        if cost > rest {
            continue;
        }
        current.push(choices[i]);
        collect_branches(choices, i, rest - cost, l, current, emit);
        current.pop();
    }
}

/// Census rows for one covering Euler characteristic and period, keeping
/// only orbifolds with at least one epimorphism.
pub fn census_rows_for_period(covering_chi: i64, l: u64) -> Vec<CensusRow> {
    generate_signatures(covering_chi, l)
        .into_iter()
        .filter_map(|sig| {
            let epi = epi_count(&EpiQuery::new(sig.clone(), l, false));
            if epi.is_zero() {
                return None;
            }
            let epi_plus = if covering_chi % 2 != 0 {
                BigUint::zero()
            } else if sig.is_closed_orientable() {
                epi.clone()
            } else {
                epi_count(&EpiQuery::new(sig.clone(), l, true))
            };
            Some(CensusRow { covering_chi, l, signature: sig, epi, epi_plus })
        })
        .collect()
}

/// Census rows for all periods `1..=max_l`.
pub fn census_for_chi(covering_chi: i64, max_l: u64) -> Vec<CensusRow> {
    (1..=max_l).flat_map(|l| census_rows_for_period(covering_chi, l)).collect()
}

/// Census needed to count maps with `n_edges` edges on `covering`: every
/// period dividing `2n`.
pub fn build_census(covering: SurfaceClass, n_edges: u64) -> Vec<CensusRow> {
    assert!(n_edges >= 1);
    let chi = covering.euler_characteristic();
    divisors(2 * n_edges)
        .into_iter()
        .flat_map(|l| census_rows_for_period(chi, l))
        .collect()
}

/// Splits rows into orientation-preserving quotients (closed orientable
/// orbifolds) and the rest.
pub fn partition_rows(rows: &[CensusRow]) -> (Vec<&CensusRow>, Vec<&CensusRow>) {
    rows.iter().partition(|r| r.signature.is_closed_orientable())
}

pub const CENSUS_CSV_HEADER: &str = "covering_chi,l,orientable,chi_orbifold,h,branch_indices,epi,epi_plus";

impl CensusRow {
    pub fn to_csv(&self) -> String {
        let idx: Vec<String> = self.signature.branch_indices.iter().map(|m| m.to_string()).collect();
        format!(
            "{},{},{},{},{},[{}],{},{}",
            self.covering_chi,
            self.l,
            if self.signature.orientable { '+' } else { '-' },
            self.signature.surface_chi(),
            self.signature.boundaries,
            idx.join(" "),
            self.epi,
            self.epi_plus
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "covering_chi": self.covering_chi,
            "l": self.l,
            "orientable": self.signature.orientable,
            "chi_orbifold": self.signature.surface_chi(),
            "h": self.signature.boundaries,
            "branch_indices": self.signature.branch_indices,
            "epi": self.epi.to_string(),
            "epi_plus": self.epi_plus.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_hurwitz_examples() {
        assert!(riemann_hurwitz_holds(0, 4, &OrbifoldSignature::new(true, 0, 0, vec![2, 4, 4])));
        assert!(riemann_hurwitz_holds(0, 1, &OrbifoldSignature::new(true, 1, 0, vec![])));
        assert!(riemann_hurwitz_holds(0, 4, &OrbifoldSignature::new(false, 1, 1, vec![])));
        assert!(!riemann_hurwitz_holds(0, 4, &OrbifoldSignature::new(true, 0, 0, vec![2, 2, 2])));
    }

    #[test]
    fn period_bounds() {
        assert_eq!(period_bound(SurfaceClass::orientable(2), 7), 12);
        assert_eq!(period_bound(SurfaceClass::orientable(3), 7), 8);
        assert_eq!(period_bound(SurfaceClass::orientable(1), 5), 10);
        assert_eq!(period_bound(SurfaceClass::non_orientable(4), 5), 6);
        assert_eq!(period_bound(SurfaceClass::non_orientable(5), 5), 10);
    }

    #[test]
    fn signatures_small() {
        let s = generate_signatures(0, 1);
        assert_eq!(
            s,
            vec![OrbifoldSignature::new(true, 1, 0, vec![]), OrbifoldSignature::new(false, 2, 0, vec![])]
        );
        let s4 = generate_signatures(0, 4);
        assert!(s4.contains(&OrbifoldSignature::new(true, 0, 2, vec![])));
        assert!(s4.contains(&OrbifoldSignature::new(false, 2, 0, vec![])));
        assert!(s4.contains(&OrbifoldSignature::new(false, 1, 1, vec![])));
        // The sphere with three index-2 points and the projective plane with one
        // satisfy the relation but admit no epimorphism, so only the disk
        // survives the census.
        let s12 = generate_signatures(1, 2);
        assert_eq!(s12.len(), 3);
        assert!(s12.contains(&OrbifoldSignature::new(false, 1, 0, vec![2])));
        let rows12 = census_rows_for_period(1, 2);
        assert_eq!(rows12.len(), 1);
        assert_eq!(rows12[0].signature, OrbifoldSignature::new(true, 0, 1, vec![2]));
        for chi in -4..=2 {
            for l in 1..=12 {
                for sig in generate_signatures(chi, l) {
                    assert!(riemann_hurwitz_holds(chi, l, &sig), "{chi} {l} {sig}");
                }
            }
        }
    }

    #[test]
    fn census_small() {
        let rows = census_rows_for_period(0, 2);
        let klein = rows
            .iter()
            .find(|r| r.signature == OrbifoldSignature::new(false, 1, 0, vec![2, 2]))
            .unwrap();
        assert_eq!(klein.epi, BigUint::from(2u32));
        let rows3 = census_rows_for_period(0, 3);
        let k3 = rows3.iter().find(|r| r.signature == OrbifoldSignature::new(false, 2, 0, vec![])).unwrap();
        assert_eq!((k3.epi.clone(), k3.epi_plus.clone()), (BigUint::from(2u32), BigUint::zero()));
        let pp = census_rows_for_period(1, 1);
        assert_eq!(pp.len(), 1);
        assert_eq!(pp[0].signature, OrbifoldSignature::new(false, 1, 0, vec![]));
        assert_eq!(pp[0].epi, BigUint::from(1u32));
    }
}
