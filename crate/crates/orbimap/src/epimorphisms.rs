//! Order-preserving (and sign-preserving) homomorphisms and epimorphisms from
//! orbifold fundamental groups onto cyclic groups.
//!
//! Two independent routes are provided. The closed forms cover bordered
//! orbifolds and closed non-orientable ones; the residue oracle counts
//! homomorphisms directly from the group presentation and covers every case.
//! Epimorphisms follow from homomorphisms by Möbius inversion over the
//! subgroup lattice of `Z_l`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::OrbimapError;
use crate::numtheory::{divisors, euler_phi, jordan_totient, lcm_list, moebius_mu};
use crate::orbifold_census::OrbifoldSignature;

/// A request for `Epi(π₁(O), Z_target)` or, when `sign_preserving`, for the
/// epimorphisms onto `Z_target` that also respect the sign structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpiQuery {
    pub signature: OrbifoldSignature,
    pub target_order: u64,
    pub sign_preserving: bool,
}

impl EpiQuery {
    pub fn new(signature: OrbifoldSignature, target_order: u64, sign_preserving: bool) -> Self {
        assert!(target_order >= 1);
        EpiQuery { signature, target_order, sign_preserving }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn order_in(x: u64, d: u64) -> u64 {
    d / gcd(x, d)
}

/// A generator's contribution to the abelianized long relation: either a set
/// of admissible residues, or a pure multiplicity for generators that drop out.
enum Gen {
    Residues(Vec<u64>),
    Factor(u64),
}

/// Counts homomorphisms by dynamic programming over residues.
///
/// With `sign_preserving = false` the target is `Z_d`; otherwise it is
/// `Z_{2d}` with even residues carrying sign `+1` and odd ones `-1`.
pub fn hom_count_oracle(sig: &OrbifoldSignature, d: u64, sign_preserving: bool) -> BigUint {
    assert!(d >= 1);
    let modulus = if sign_preserving { 2 * d } else { d };
    let parity_ok = |x: u64, want_odd: bool| !sign_preserving || (x % 2 == 1) == want_odd;
    let mut gens = Vec::new();
    for &m in &sig.branch_indices {
        gens.push(Gen::Residues((0..modulus).filter(|&x| order_in(x, modulus) == m && parity_ok(x, false)).collect()));
    }
    for _ in 0..sig.boundaries {
        let refl: Vec<u64> = (0..modulus).filter(|&x| order_in(x, modulus) == 2 && parity_ok(x, true)).collect();
        gens.push(Gen::Factor(refl.len() as u64));
        gens.push(Gen::Residues((0..modulus).filter(|&x| parity_ok(x, false)).collect()));
    }
    for _ in 0..sig.genus {
        if sig.orientable {
            let free = (0..modulus).filter(|&x| parity_ok(x, false)).count() as u64;
            gens.push(Gen::Factor(free * free));
        } else {
            gens.push(Gen::Residues(
                (0..modulus).filter(|&x| parity_ok(x, true)).map(|x| (2 * x) % modulus).collect(),
            ));
        }
    }
    let mut table = vec![BigUint::zero(); modulus as usize];
    table[0] = BigUint::one();
    for g in gens {
        match g {
            Gen::Factor(f) => {
                for v in table.iter_mut() {
                    *v *= f;
                }
            }
            Gen::Residues(rs) => {
                let mut next = vec![BigUint::zero(); modulus as usize];
                for (acc, v) in table.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for &x in &rs {
                        next[(acc + x as usize) % modulus as usize] += v;
                    }
                }
                table = next;
            }
        }
    }
    table.swap_remove(0)
}

fn phi_product(sig: &OrbifoldSignature) -> BigUint {
    sig.branch_indices.iter().fold(BigUint::one(), |acc, &m| acc * euler_phi(m))
}

fn all_divide(sig: &OrbifoldSignature, d: u64) -> bool {
    sig.branch_indices.iter().all(|&m| d % m == 0)
}

/// Closed forms for homomorphism counts.
///
/// For closed non-orientable orbifolds and even `d`, the count is nonzero only
/// when `Σ d/m_i` is even; the residue oracle confirms this parity.
pub fn hom_count_closed_form(sig: &OrbifoldSignature, d: u64, sign_preserving: bool) -> Result<BigUint, OrbimapError> {
    if sig.is_closed_orientable() {
        return Err(OrbimapError::Unsupported(format!("no closed form for closed orientable {sig}")));
    }
    if !all_divide(sig, d) {
        return Ok(BigUint::zero());
    }
    let phi = phi_product(sig);
    let g = sig.genus;
    let h = sig.boundaries;
    if h > 0 {
        let exponent = if sig.orientable { 2 * g + h - 1 } else { g + h - 1 };
        let parity_ok = if sign_preserving { d % 2 == 1 } else { d % 2 == 0 };
        return Ok(if parity_ok { BigUint::from(d).pow(exponent) * phi } else { BigUint::zero() });
    }
    let base = BigUint::from(d).pow(g - 1) * phi;
    if d % 2 == 1 {
        return Ok(base);
    }
    let sum: u64 = sig.branch_indices.iter().map(|&m| d / m).sum();
    let ok = if sign_preserving { sum % 2 == (g as u64) % 2 } else { sum % 2 == 0 };
    Ok(if ok { base * 2u32 } else { BigUint::zero() })
}

fn jordan_at(k: u32, num: u64, den: u64) -> BigUint {
    if num % den != 0 {
        BigUint::zero()
    } else {
        jordan_totient(k, num / den)
    }
}

/// Denominator of `Σ 1/(2 m_i)` in lowest terms.
fn half_reciprocal_denominator(ms: &[u64]) -> u64 {
    let big = 2 * lcm_list(ms);
    let num: u64 = ms.iter().map(|&m| big / (2 * m)).sum();
    big / gcd(num, big)
}

/// Closed forms for epimorphism counts (bordered orbifolds of either
/// orientability and closed non-orientable orbifolds).
pub fn epi_count_closed_form(q: &EpiQuery) -> Result<BigUint, OrbimapError> {
    let sig = &q.signature;
    if sig.is_closed_orientable() {
        return Err(OrbimapError::Unsupported(format!("no closed form for closed orientable {sig}")));
    }
    let phi = phi_product(sig);
    let g = sig.genus;
    let h = sig.boundaries;
    let m = lcm_list(&sig.branch_indices);
    let mut with_two = sig.branch_indices.clone();
    with_two.push(2);
    let m2 = lcm_list(&with_two);
    if !q.sign_preserving {
        let l = q.target_order;
        if h > 0 {
            let k = if sig.orientable { 2 * g + h - 1 } else { g + h - 1 };
            if l % 2 == 1 {
                return Ok(BigUint::zero());
            }
            return Ok(BigUint::from(m2).pow(k) * jordan_at(k, l, m2) * phi);
        }
        let k = g - 1;
        if l % 2 == 1 {
            return Ok(BigUint::from(m).pow(k) * jordan_at(k, l, m) * phi);
        }
        let b = half_reciprocal_denominator(&sig.branch_indices);
        let mut with_b = with_two.clone();
        with_b.push(b);
        let mb = lcm_list(&with_b);
        let main = BigUint::from(2u32) * BigUint::from(mb).pow(k) * jordan_at(k, l, mb) * &phi;
        if l % 4 == 0 {
            return Ok(main);
        }
        let sub = BigUint::from(m).pow(k) * jordan_at(k, l, 2 * m) * &phi;
        return Ok(main - sub);
    }
    if q.target_order % 2 == 1 {
        return Ok(BigUint::zero());
    }
    let l = q.target_order / 2;
    if h > 0 {
        let k = if sig.orientable { 2 * g + h - 1 } else { g + h - 1 };
        if l % 2 == 0 {
            return Ok(BigUint::zero());
        }
        return Ok(BigUint::from(m).pow(k) * jordan_at(k, l, m) * phi);
    }
    let k = g - 1;
    if l % 2 == 1 {
        return Ok(BigUint::from(m).pow(k) * jordan_at(k, l, m) * phi);
    }
    // Every d in the inversion has the same 2-adic part as l, so the parity
    // guard of the homomorphism count is uniform and can be checked once.
    if !all_divide(sig, l) {
        return Ok(BigUint::zero());
    }
    let sum: u64 = sig.branch_indices.iter().map(|&mi| l / mi).sum();
    if sum % 2 != (g as u64) % 2 {
        return Ok(BigUint::zero());
    }
    // Only divisors d with l/d odd enter, so d keeps the full power of two
    // dividing l; lcm(2, m_i) alone undercounts once 4 | l.
    let two_part = l & l.wrapping_neg();
    let mt = lcm_list(&[m, two_part]);
    Ok(BigUint::from(2u32) * BigUint::from(mt).pow(k) * jordan_at(k, l, mt) * phi)
}

/// Möbius inversion over the residue oracle.
pub fn epi_count_oracle(q: &EpiQuery) -> BigUint {
    mobius_invert(q, |sig, d, plus| hom_count_oracle(sig, d, plus))
}

fn mobius_invert(q: &EpiQuery, hom: impl Fn(&OrbifoldSignature, u64, bool) -> BigUint) -> BigUint {
    let mut acc = BigInt::zero();
    let l = if q.sign_preserving {
        if q.target_order % 2 == 1 {
            return BigUint::zero();
        }
        q.target_order / 2
    } else {
        q.target_order
    };
    for d in divisors(l) {
        if q.sign_preserving && (l / d) % 2 == 0 {
            continue;
        }
        let mu = moebius_mu(l / d);
        if mu == 0 {
            continue;
        }
        let term = BigInt::from(hom(&q.signature, d, q.sign_preserving));
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("epimorphism counts are nonnegative")
}

/// Exact epimorphism count: closed forms where they exist, otherwise the
/// oracle composed with Möbius inversion.
pub fn epi_count(q: &EpiQuery) -> BigUint {
    match epi_count_closed_form(q) {
        Ok(v) => v,
        Err(_) => epi_count_oracle(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(o: bool, g: u32, h: u32, ms: &[u64]) -> OrbifoldSignature {
        OrbifoldSignature::new(o, g, h, ms.to_vec())
    }

    fn n(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn hom_closed_form_examples() {
        assert_eq!(hom_count_closed_form(&sig(true, 0, 2, &[]), 2, false).unwrap(), n(2));
        assert_eq!(hom_count_closed_form(&sig(true, 0, 1, &[2]), 2, false).unwrap(), n(1));
        assert_eq!(hom_count_closed_form(&sig(false, 2, 0, &[]), 3, false).unwrap(), n(3));
        assert!(hom_count_closed_form(&sig(true, 1, 0, &[]), 3, false).is_err());
    }

    #[test]
    fn oracle_examples() {
        for d in 1..=12u32 {
            assert_eq!(hom_count_oracle(&sig(true, 1, 0, &[]), d as u64, false), n(d * d));
        }
        // Exact orders (2, 4, 4) in Z_4: r1 = 2 and r2 = r3, so only two triples sum to 0.
        assert_eq!(hom_count_oracle(&sig(true, 0, 0, &[2, 4, 4]), 4, false), n(2));
        assert_eq!(hom_count_oracle(&sig(false, 2, 0, &[]), 2, false), n(4));
    }

    #[test]
    fn epi_examples() {
        let q = |s, l, p| epi_count(&EpiQuery::new(s, l, p));
        assert_eq!(q(sig(true, 0, 2, &[]), 2, false), n(2));
        assert_eq!(q(sig(false, 2, 0, &[]), 2, false), n(3));
        assert_eq!(q(sig(false, 2, 0, &[]), 4, true), n(4));
        assert_eq!(q(sig(true, 0, 1, &[2]), 2, false), n(1));
        assert_eq!(q(sig(false, 2, 0, &[]), 3, false), n(2));
        assert_eq!(q(sig(false, 2, 0, &[]), 5, false), n(4));
    }

    #[test]
    fn trivial_quotient_has_one_epi() {
        for s in [sig(true, 2, 0, &[]), sig(false, 3, 0, &[]), sig(true, 1, 0, &[])] {
            assert_eq!(epi_count(&EpiQuery::new(s, 1, false)), n(1));
        }
    }

    #[test]
    fn closed_forms_match_oracle() {
        use crate::orbifold_census::generate_signatures;
        for chi in -4..=2 {
            for l in 1..=12u64 {
                for s in generate_signatures(chi, l) {
                    if s.is_closed_orientable() {
                        continue;
                    }
                    for d in divisors(24) {
                        for plus in [false, true] {
                            assert_eq!(
                                hom_count_closed_form(&s, d, plus).unwrap(),
                                hom_count_oracle(&s, d, plus),
                                "hom {s} d={d} plus={plus}"
                            );
                        }
                    }
                    for target in [l, 2 * l] {
                        for plus in [false, true] {
                            let q = EpiQuery::new(s.clone(), target, plus);
                            assert_eq!(epi_count_closed_form(&q).unwrap(), epi_count_oracle(&q), "epi {s} target={target} plus={plus}");
                        }
                    }
                }
            }
        }
    }
}
