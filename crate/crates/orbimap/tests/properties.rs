use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

use orbimap::assembly::{sensed_count, unsensed_any, unsensed_nonorientable, unsensed_orientable};
use orbimap::brute_oracle::enumerate_maps;
use orbimap::epimorphisms::{epi_count_oracle, hom_count_oracle, EpiQuery};
use orbimap::numtheory::{divisors, euler_phi, jordan_totient, moebius_mu};
use orbimap::orbifold_census::{generate_signatures, riemann_hurwitz_holds, SurfaceClass};
use orbimap::quotient_dp::{placements, CountCache, Engine, EngineConfig, Mode, QuotientKey, Root};

/// Placements by brute force: every partial assignment of distinct index
/// values to cells whose multiset of values is what the semiedges leave over.
fn placements_brute(cells: usize, semiedges: usize, indices: &[u64]) -> BigUint {
    let mut rest = indices.to_vec();
    for _ in 0..semiedges {
        match rest.iter().position(|&m| m == 2) {
            Some(i) => {
                rest.remove(i);
            }
            None => return BigUint::zero(),
        }
    }
    rest.sort_unstable();
    let values: Vec<u64> = {
        let mut v = rest.clone();
        v.dedup();
        v
    };
    // each cell holds nothing or one of the values
    let choices = values.len() + 1;
    let mut count = 0u64;
    for code in 0..choices.pow(cells as u32) {
        let (mut c, mut got) = (code, Vec::new());
        for _ in 0..cells {
            if c % choices > 0 {
                got.push(values[c % choices - 1]);
            }
            c /= choices;
        }
        got.sort_unstable();
        if got == rest {
            count += 1;
        }
    }
    BigUint::from(count)
}

fn table(e: &mut Engine, n: u8, chi_hat: i8, h: u8) -> BTreeMap<(usize, usize), u128> {
    e.flag_rooted(n, chi_hat, h).entries().into_iter().map(|(c, s, v)| ((c, s), v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn placements_match_brute_force(cells in 0usize..6, semiedges in 0usize..3, indices in prop::collection::vec(2u64..5, 0..5)) {
        prop_assert_eq!(placements(cells, semiedges, &indices), placements_brute(cells, semiedges, &indices));
    }

    #[test]
    fn totient_sums(n in 1u64..2000, k in 1u32..4) {
        let ds = divisors(n);
        prop_assert_eq!(ds.iter().map(|&d| euler_phi(d)).sum::<BigUint>(), BigUint::from(n));
        prop_assert_eq!(ds.iter().map(|&d| jordan_totient(k, d)).sum::<BigUint>(), BigUint::from(n).pow(k));
        prop_assert_eq!(ds.iter().map(|&d| moebius_mu(d) as i64).sum::<i64>(), i64::from(n == 1));
    }

    #[test]
    fn signatures_satisfy_riemann_hurwitz(chi in -4i64..=2, l in 1u64..=12) {
        for sig in generate_signatures(chi, l) {
            prop_assert!(riemann_hurwitz_holds(chi, l, &sig), "{}", sig);
        }
    }

    #[test]
    fn epimorphisms_invert_homomorphisms(chi in -3i64..=2, l in 1u64..=8, plus: bool) {
        for sig in generate_signatures(chi, l) {
            // a sign-preserving hom lands in Z_2l and its image has odd index
            let sum: BigUint = divisors(l)
                .into_iter()
                .filter(|d| !plus || (l / d) % 2 == 1)
                .map(|d| epi_count_oracle(&EpiQuery::new(sig.clone(), if plus { 2 * d } else { d }, plus)))
                .sum();
            prop_assert_eq!(sum, hom_count_oracle(&sig, l, plus), "{}", sig);
        }
    }

    #[test]
    fn combined_covers_orientable(n in 1u8..=6, chi_hat in -4i8..=2, h in 0u8..=3) {
        let mut eo = Engine::new(EngineConfig::new(Mode::Orientable));
        let mut ec = Engine::new(EngineConfig::new(Mode::Combined));
        let (o, c) = (table(&mut eo, n, chi_hat, h), table(&mut ec, n, chi_hat, h));
        for (cell, v) in o {
            prop_assert!(c.get(&cell).copied().unwrap_or(0) >= v, "cell {:?}", cell);
        }
    }

    #[test]
    fn root_degree_beyond_darts_is_zero(n in 0u8..=6, extra in 1u8..4, chi_hat in -2i8..=2, h in 0u8..=2, combined: bool) {
        let mode = if combined { Mode::Combined } else { Mode::Orientable };
        let mut e = Engine::new(EngineConfig::new(mode));
        let k = n + extra;
        for root in [Root::Interior(k), Root::Boundary { k, left: false, right: false }] {
            prop_assert!(e.count(&QuotientKey::plain(mode, n, chi_hat, root, h)).is_zero());
        }
    }

    #[test]
    fn cache_is_deterministic(n in 1u8..=5, chi_hat in -2i8..=2, h in 0u8..=2, combined: bool) {
        let mode = if combined { Mode::Combined } else { Mode::Orientable };
        let mut cache = CountCache::new();
        let first = cache.flag_table(mode, n, chi_hat, h).unwrap();
        prop_assert_eq!(&cache.flag_table(mode, n, chi_hat, h).unwrap(), &first);
        cache.clear();
        prop_assert_eq!(&cache.flag_table(mode, n, chi_hat, h).unwrap(), &first);
        // served from records alone
        let mut reloaded = CountCache::from_records(cache.into_records(), 1);
        prop_assert_eq!(reloaded.flag_table(mode, n, chi_hat, h).unwrap(), first);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sensed_between_unsensed_and_double(genus in 0u32..=2, n in 1u64..=7) {
        let mut cache = CountCache::new();
        let s = SurfaceClass::orientable(genus);
        let sensed = sensed_count(s, n, &mut cache).unwrap();
        let unsensed = unsensed_orientable(s, n, &mut cache).unwrap();
        prop_assert!(unsensed <= sensed && sensed <= &unsensed * 2u32);
    }

    #[test]
    fn unsensed_any_splits_by_orientability(chi in -3i64..=2, n in 1u64..=6) {
        let mut cache = CountCache::new();
        let mut parts = BigUint::zero();
        if chi % 2 == 0 {
            parts += unsensed_orientable(SurfaceClass::orientable(((2 - chi) / 2) as u32), n, &mut cache).unwrap();
        }
        if chi <= 1 {
            parts += unsensed_nonorientable(SurfaceClass::non_orientable((2 - chi) as u32), n, &mut cache).unwrap();
        }
        prop_assert_eq!(unsensed_any(chi, n, &mut cache).unwrap(), parts);
    }
}

#[test]
fn automorphisms_divide_flag_count() {
    for n in 1..=3 {
        for m in enumerate_maps(n).unwrap() {
            assert_eq!((4 * n as usize) % m.automorphisms, 0);
            assert!(m.automorphisms >= 1);
        }
    }
}

#[test]
fn cache_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("orbimap-props-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cache.txt");
    let mut cache = CountCache::new();
    let want = sensed_count(SurfaceClass::orientable(1), 6, &mut cache).unwrap();
    assert!(cache.is_dirty() && !cache.is_empty());
    cache.save(&path).unwrap();
    let mut loaded = CountCache::load(&path).unwrap();
    assert_eq!(loaded.records(), cache.records());
    assert!(!loaded.is_dirty());
    assert_eq!(sensed_count(SurfaceClass::orientable(1), 6, &mut loaded).unwrap(), want);
    assert!(!loaded.is_dirty(), "a warm cache computes nothing new");

    std::fs::write(&path, "some other format\n").unwrap();
    assert!(CountCache::load(&path).unwrap().is_empty());
    std::fs::write(&path, format!("{}\nzz\t12\n", orbimap::quotient_dp::CACHE_HEADER)).unwrap();
    assert!(CountCache::load(&path).is_err());
    assert!(CountCache::load(&dir.join("missing")).unwrap().is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}
