//! Rooted quotient maps on orbifolds.
pub mod cache;
pub mod engine;
pub mod explicit;

use num_bigint::BigUint;
use num_traits::Zero;

pub use cache::{CellCounts, CountCache, CACHE_HEADER};
pub use engine::{BoundaryVertexMark, CellTable, Engine, EngineConfig, Mode, QuotientKey, Root};
pub use explicit::{disk_counts, moebius_counts, projective_rooted, sphere_rooted, DiskVariant, MoebiusVariant, Recurrences};

use crate::error::OrbimapError;
use crate::numtheory::{factorial, falling_factorial};
use crate::orbifold_census::OrbifoldSignature;

/// Ways to put the branch points of `indices` on a map with `cells`
/// interior vertices and faces and `semiedges` dangling semiedges.
///
/// Every semiedge ends in its own index-2 point. The other points go to
/// distinct cells; points of equal index are interchangeable.
pub fn placements(cells: usize, semiedges: usize, indices: &[u64]) -> BigUint {
    let twos = indices.iter().filter(|&&m| m == 2).count();
    if semiedges > twos {
        return BigUint::zero();
    }
    let mut mult: Vec<usize> = Vec::new();
    let mut rest = indices.iter().filter(|&&m| m != 2).copied().collect::<Vec<_>>();
    rest.sort_unstable();
    for w in rest.chunk_by(|a, b| a == b) {
        mult.push(w.len());
    }
    if twos > semiedges {
        mult.push(twos - semiedges);
    }
    let t: usize = mult.iter().sum();
    if t > cells {
        return BigUint::zero();
    }
    let ways = falling_factorial(cells as u64, t as u64);
    let sym: BigUint = mult.iter().map(|&k| factorial(k as u64)).product();
    ways / sym
}

/// Total over a cell table of counts times placements.
pub fn place_branch_points(counts: &CellCounts, sig: &OrbifoldSignature) -> BigUint {
    counts
        .iter()
        .map(|(&(c, s), v)| v * placements(c, s, &sig.branch_indices))
        .sum()
}

fn narrow<T: TryFrom<i64>>(v: i64, what: &str) -> Result<T, OrbimapError> {
    T::try_from(v).map_err(|_| OrbimapError::SizeLimit(format!("{what} = {v} is out of range")))
}

/// Rooted quotient maps with `m` darts on the orbifold `sig`.
pub fn tau_orbifold(sig: &OrbifoldSignature, m: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if m == 0 {
        return Err(OrbimapError::Invalid("tau_orbifold needs at least one dart".into()));
    }
    let h = sig.boundaries as i64;
    let chi_hat = sig.surface_chi() + h;
    if chi_hat < 2 - m as i64 / 2 {
        return Ok(BigUint::zero());
    }
    let table = cache.surface_table(
        sig.orientable,
        narrow(chi_hat, "capped Euler characteristic")?,
        narrow(h, "boundary count")?,
        narrow(m as i64, "dart count")?,
    )?;
    Ok(place_branch_points(&table, sig))
}

/// Number of rooted quotient maps in the class `key`, summed over cells and
/// semiedges. A [`Root::Flag`] key with no marks means the flag-rooted total
/// over its surface with `bare_boundaries` holes.
pub fn count_quotient_maps(key: &QuotientKey, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if key.root == Root::Flag {
        let marked = !key.root_marks.is_empty() || !key.boundaries.is_empty() || !key.interior_marks.is_empty();
        if marked {
            return Err(OrbimapError::Unsupported("flag roots take no marks".into()));
        }
        let t = cache.flag_table(key.mode, key.n, key.chi_hat, key.bare_boundaries)?;
        return Ok(t.values().sum());
    }
    let t = cache.with_engine(key.mode, |e| e.count(key))?;
    Ok(t.entries().into_iter().map(|(_, _, v)| BigUint::from(v)).sum())
}
