//! Burnside assembly: census rows, epimorphism counts and quotient-map counts
//! combined into sensed and unsensed map counts.
//!
//! For a covering surface of characteristic `χ` with `n` edges (`4n` flags)
//! every cyclic action of order `l` has a quotient with `2n/l` darts. Summing
//! `τ_O · Epi_o` over all quotients and dividing by `4n` counts unsensed maps
//! on both surfaces of characteristic `χ`; using `Epi⁺` for the reversing
//! quotients isolates the orientable surface.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::OrbimapError;
use crate::numtheory::{divisors, euler_phi};
use crate::orbifold_census::{build_census, CensusRow, OrbifoldSignature, SurfaceClass};
use crate::quotient_dp::{tau_orbifold, CountCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Up to orientation-preserving homeomorphisms.
    Sensed,
    /// Up to all homeomorphisms.
    Unsensed,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Sensed => "sensed",
            Flavor::Unsensed => "unsensed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MapCountQuery {
    pub surface: SurfaceClass,
    pub n_edges: u64,
    pub flavor: Flavor,
}

impl MapCountQuery {
    pub fn new(surface: SurfaceClass, n_edges: u64, flavor: Flavor) -> Result<Self, OrbimapError> {
        if !surface.is_valid() {
            return Err(OrbimapError::Invalid("non-orientable surfaces have genus >= 1".into()));
        }
        if n_edges == 0 {
            return Err(OrbimapError::Invalid("maps need at least one edge".into()));
        }
        if flavor == Flavor::Sensed && !surface.orientable {
            return Err(OrbimapError::Invalid("sensed counts need an orientable surface".into()));
        }
        Ok(MapCountQuery { surface, n_edges, flavor })
    }
}

/// One orbifold's share of a Burnside sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub l: u64,
    pub signature: OrbifoldSignature,
    pub darts: u64,
    pub tau: BigUint,
    /// The epimorphism count this term is weighted by.
    pub weight: BigUint,
}

impl Term {
    pub fn contribution(&self) -> BigUint {
        &self.tau * &self.weight
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "l": self.l,
            "orbifold": self.signature.to_string(),
            "darts": self.darts,
            "tau": self.tau.to_string(),
            "epi": self.weight.to_string(),
            "contribution": self.contribution().to_string(),
        })
    }
}

/// A count together with the terms it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCount {
    pub query: MapCountQuery,
    pub count: BigUint,
    pub terms: Vec<Term>,
}

impl MapCount {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "surface": {"orientable": self.query.surface.orientable, "genus": self.query.surface.genus},
            "edges": self.query.n_edges,
            "flavor": self.query.flavor.as_str(),
            "count": self.count.to_string(),
            "terms": self.terms.iter().map(Term::to_json).collect::<Vec<_>>(),
        })
    }
}

fn exact_div(num: &BigUint, den: u64) -> Result<BigUint, OrbimapError> {
    let (q, r) = num.div_rem(&BigUint::from(den));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(OrbimapError::NonIntegral { numerator: num.to_string(), denominator: den })
    }
}

/// Quotient dart count for period `l`, or `None` when the quotient would
/// have fewer than two flags.
fn quotient_darts(n: u64, l: u64) -> Option<u64> {
    (2 * n % l == 0 && l <= 2 * n).then(|| 2 * n / l)
}

fn rows_for(chi: i64, n: u64) -> Vec<CensusRow> {
    // build_census only looks at χ
    let surface = if chi % 2 == 0 {
        SurfaceClass::orientable(((2 - chi) / 2) as u32)
    } else {
        SurfaceClass::non_orientable((2 - chi) as u32)
    };
    build_census(surface, n)
}

/// Evaluates every quotient table the rows need on `jobs` threads, then
/// folds the results into `cache`.
pub fn prefetch(rows: &[CensusRow], n: u64, jobs: usize, cache: &mut CountCache) -> Result<(), OrbimapError> {
    if jobs <= 1 {
        return Ok(());
    }
    let mut work: BTreeSet<(bool, i64, u32, u64)> = BTreeSet::new();
    for r in rows {
        let Some(m) = quotient_darts(n, r.l) else { continue };
        let s = &r.signature;
        work.insert((s.orientable, s.surface_chi(), s.boundaries, m));
    }
    let work: Vec<_> = work.into_iter().collect();
    let seed = cache.records().clone();
    let max_states = cache.max_states();
    let results: Vec<Result<_, OrbimapError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let mine: Vec<_> = work.iter().skip(w).step_by(jobs).copied().collect();
                let seed = seed.clone();
                scope.spawn(move || {
                    let mut local = CountCache::from_records(seed, max_states);
                    for (o, chi, h, m) in mine {
                        let sig = OrbifoldSignature {
                            orientable: o,
                            genus: if o { ((2 - chi - h as i64) / 2) as u32 } else { (2 - chi - h as i64) as u32 },
                            boundaries: h,
                            branch_indices: Vec::new(),
                        };
                        tau_orbifold(&sig, m, &mut local)?;
                    }
                    Ok(local.into_records())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for r in results {
        cache.merge_records(&r?)?;
    }
    Ok(())
}

/// The Burnside numerators for characteristic `chi`: all quotients weighted
/// by `Epi`, and the same with reversing quotients weighted by `Epi⁺`.
struct Sums {
    combined: Vec<Term>,
    orientable: Vec<Term>,
    sensed: Vec<Term>,
}

fn burnside_terms(chi: i64, n: u64, jobs: usize, cache: &mut CountCache) -> Result<Sums, OrbimapError> {
    let rows = rows_for(chi, n);
    prefetch(&rows, n, jobs, cache)?;
    let mut sums = Sums { combined: Vec::new(), orientable: Vec::new(), sensed: Vec::new() };
    for r in rows {
        let Some(m) = quotient_darts(n, r.l) else { continue };
        let tau = tau_orbifold(&r.signature, m, cache)?;
        if tau.is_zero() {
            continue;
        }
        let term = |weight: &BigUint| Term {
            l: r.l,
            signature: r.signature.clone(),
            darts: m,
            tau: tau.clone(),
            weight: weight.clone(),
        };
        sums.combined.push(term(&r.epi));
        if r.signature.is_closed_orientable() {
            sums.orientable.push(term(&r.epi));
            sums.sensed.push(term(&r.epi));
        } else if !r.epi_plus.is_zero() {
            sums.orientable.push(term(&r.epi_plus));
        }
    }
    Ok(sums)
}

fn total(terms: &[Term]) -> BigUint {
    terms.iter().map(Term::contribution).sum()
}

/// Counts maps as described by `q`, keeping the Burnside terms.
pub fn count_maps(q: &MapCountQuery, jobs: usize, cache: &mut CountCache) -> Result<MapCount, OrbimapError> {
    let q = MapCountQuery::new(q.surface, q.n_edges, q.flavor)?;
    let n = q.n_edges;
    let chi = q.surface.euler_characteristic();
    let sums = burnside_terms(chi, n, jobs, cache)?;
    let (count, terms) = match (q.flavor, q.surface.orientable) {
        (Flavor::Sensed, _) => (exact_div(&total(&sums.sensed), 2 * n)?, sums.sensed),
        (Flavor::Unsensed, true) => (exact_div(&total(&sums.orientable), 4 * n)?, sums.orientable),
        (Flavor::Unsensed, false) => {
            let all = total(&sums.combined);
            let or = total(&sums.orientable);
            if or > all {
                return Err(OrbimapError::Invariant(format!("orientable numerator {or} exceeds combined {all}")));
            }
            // Reversing quotients enter with Epi − Epi⁺, orientable ones cancel.
            let mut terms = Vec::new();
            for t in sums.combined {
                let plus = sums.orientable.iter().find(|o| o.l == t.l && o.signature == t.signature);
                let w = match plus {
                    Some(o) => &t.weight - &o.weight,
                    None => t.weight.clone(),
                };
                if !w.is_zero() {
                    terms.push(Term { weight: w, ..t });
                }
            }
            (exact_div(&(all - or), 4 * n)?, terms)
        }
    };
    Ok(MapCount { query: q, count, terms })
}

/// Sensed maps with `n` edges on an orientable surface.
pub fn sensed_count(surface: SurfaceClass, n: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    Ok(count_maps(&MapCountQuery::new(surface, n, Flavor::Sensed)?, 1, cache)?.count)
}

/// Unsensed maps with `n` edges on an orientable surface.
pub fn unsensed_orientable(surface: SurfaceClass, n: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if !surface.orientable {
        return Err(OrbimapError::Invalid(format!("{surface} is not orientable")));
    }
    Ok(count_maps(&MapCountQuery::new(surface, n, Flavor::Unsensed)?, 1, cache)?.count)
}

/// Unsensed maps with `n` edges on a non-orientable surface.
pub fn unsensed_nonorientable(surface: SurfaceClass, n: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if surface.orientable {
        return Err(OrbimapError::Invalid(format!("{surface} is orientable")));
    }
    Ok(count_maps(&MapCountQuery::new(surface, n, Flavor::Unsensed)?, 1, cache)?.count)
}

/// Unsensed maps with `n` edges on either closed surface of characteristic
/// `chi`.
pub fn unsensed_any(chi: i64, n: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if chi > 2 {
        return Err(OrbimapError::Invalid(format!("no closed surface has characteristic {chi}")));
    }
    if n == 0 {
        return Err(OrbimapError::Invalid("maps need at least one edge".into()));
    }
    exact_div(&total(&burnside_terms(chi, n, 1, cache)?.combined), 4 * n)
}

/// Unsensed torus maps from the classical formula in sensed counts and
/// unbranched Klein bottle, annulus and Möbius band quotients.
///
/// The annulus and band arguments are flag counts, the Klein bottle
/// argument is a dart count.
pub fn torus_crosscheck(n: u64, cache: &mut CountCache) -> Result<BigUint, OrbimapError> {
    if n == 0 {
        return Err(OrbimapError::Invalid("maps need at least one edge".into()));
    }
    let annulus = OrbifoldSignature::new(true, 0, 2, vec![]);
    let band = OrbifoldSignature::new(false, 1, 1, vec![]);
    let klein = OrbifoldSignature::new(false, 2, 0, vec![]);
    let sensed = sensed_count(SurfaceClass::orientable(1), n, cache)?;
    // everything over the common denominator 4n
    let mut num = BigInt::from(sensed) * (2 * n);
    for q in divisors(n) {
        let phi = BigInt::from(euler_phi(q));
        let darts = n / q;
        let k = BigInt::from(tau_orbifold(&klein, darts, cache)?);
        if q % 2 == 1 {
            let c = BigInt::from(tau_orbifold(&annulus, darts, cache)?);
            let m = BigInt::from(tau_orbifold(&band, darts, cache)?);
            num += &phi * (c + m + k);
        } else {
            num += phi * k * 4;
        }
    }
    let num = num.to_biguint().expect("sum of counts is nonnegative");
    exact_div(&num, 4 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let mut cache = CountCache::new();
        let torus = SurfaceClass::orientable(1);
        assert_eq!(unsensed_orientable(torus, 2, &mut cache).unwrap(), BigUint::from(1u32));
        assert_eq!(unsensed_orientable(torus, 1, &mut cache).unwrap(), BigUint::zero());
        assert_eq!(sensed_count(SurfaceClass::orientable(0), 1, &mut cache).unwrap(), BigUint::from(2u32));
        let p = SurfaceClass::non_orientable(1);
        assert_eq!(unsensed_nonorientable(p, 1, &mut cache).unwrap(), BigUint::from(1u32));
        assert_eq!(unsensed_any(0, 2, &mut cache).unwrap(), BigUint::from(3u32));
        assert_eq!(unsensed_any(1, 1, &mut cache).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn sensed_needs_orientable() {
        let q = MapCountQuery::new(SurfaceClass::non_orientable(2), 3, Flavor::Sensed);
        assert!(matches!(q, Err(OrbimapError::Invalid(_))));
    }
}
