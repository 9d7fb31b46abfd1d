//! Frozen enumeration counts against the Burnside pipeline.

use num_bigint::BigUint;

use orbimap::assembly::{sensed_count, unsensed_any, unsensed_nonorientable, unsensed_orientable};
use orbimap::brute_oracle::{enumerate_maps, golden_records, oracle_sensed, oracle_unsensed, read_golden, write_golden};
use orbimap::orbifold_census::SurfaceClass;
use orbimap::quotient_dp::CountCache;

const GOLDEN: &str = include_str!("data/golden.jsonl");

#[test]
fn golden_file_matches_assembly() {
    let mut cache = CountCache::new();
    let records = read_golden(GOLDEN).unwrap();
    assert!(records.iter().any(|r| r.n_edges == 4));
    for r in records {
        let (s, n) = (r.surface, r.n_edges);
        let unsensed = if s.orientable {
            unsensed_orientable(s, n, &mut cache)
        } else {
            unsensed_nonorientable(s, n, &mut cache)
        };
        assert_eq!(unsensed.unwrap().to_string(), r.unsensed, "{s}, n={n}");
        if let Some(sensed) = r.sensed {
            assert_eq!(sensed_count(s, n, &mut cache).unwrap().to_string(), sensed, "{s}, n={n}");
        }
    }
}

#[test]
fn golden_file_is_reproducible() {
    let mut out = Vec::new();
    write_golden(&golden_records(3).unwrap(), &mut out).unwrap();
    let fresh = String::from_utf8(out).unwrap();
    let frozen: Vec<&str> = GOLDEN.lines().filter(|l| l.contains("\"n_edges\":1,") || l.contains("\"n_edges\":2,") || l.contains("\"n_edges\":3,")).collect();
    assert_eq!(fresh.lines().collect::<Vec<_>>(), frozen);
}

#[test]
fn small_examples() {
    let n = |v: u32| BigUint::from(v);
    assert_eq!(oracle_unsensed(SurfaceClass::non_orientable(1), 1).unwrap(), n(1));
    assert_eq!(oracle_unsensed(SurfaceClass::orientable(0), 2).unwrap(), n(4));
    assert_eq!(oracle_unsensed(SurfaceClass::non_orientable(2), 2).unwrap(), n(2));
    let mut cache = CountCache::new();
    assert_eq!(unsensed_any(0, 2, &mut cache).unwrap(), n(3));
    assert_eq!(oracle_sensed(SurfaceClass::orientable(1), 2).unwrap(), sensed_count(SurfaceClass::orientable(1), 2, &mut cache).unwrap());
}

#[test]
fn classes_partition_by_surface() {
    for edges in 1..=3 {
        let maps = enumerate_maps(edges).unwrap();
        let mut total = BigUint::from(0u32);
        for g in 0..=edges as u32 {
            total += oracle_unsensed(SurfaceClass::orientable(g), edges).unwrap();
        }
        for g in 1..=2 * edges as u32 {
            total += oracle_unsensed(SurfaceClass::non_orientable(g), edges).unwrap();
        }
        assert_eq!(total, BigUint::from(maps.len()), "n={edges}");
    }
}

#[test]
fn sensed_adds_chiral_classes() {
    for edges in 1..=3 {
        let maps = enumerate_maps(edges).unwrap();
        for g in 0..=1 {
            let s = SurfaceClass::orientable(g);
            let chiral = maps.iter().filter(|m| m.surface() == s && !m.reflexible).count();
            let want = oracle_unsensed(s, edges).unwrap() + BigUint::from(chiral);
            assert_eq!(oracle_sensed(s, edges).unwrap(), want);
        }
    }
}
