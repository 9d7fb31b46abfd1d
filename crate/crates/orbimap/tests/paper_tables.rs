//! Published unsensed counts at sizes cheap enough for every test run.

use orbimap::assembly::{unsensed_nonorientable, unsensed_orientable};
use orbimap::orbifold_census::SurfaceClass;
use orbimap::quotient_dp::CountCache;
use orbimap::reference::{lookup, NON_ORIENTABLE, ORIENTABLE};

#[test]
fn orientable_up_to_eight_edges() {
    let mut cache = CountCache::new();
    let mut seen = 0;
    for &(g, n, want) in ORIENTABLE.iter().filter(|r| r.1 <= 8) {
        let got = unsensed_orientable(SurfaceClass::orientable(g), n, &mut cache).unwrap();
        assert_eq!(got.to_string(), want, "genus {g}, n={n}");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn non_orientable_up_to_six_edges() {
    let mut cache = CountCache::new();
    for &(g, n, want) in NON_ORIENTABLE.iter().filter(|r| r.1 <= 6) {
        let got = unsensed_nonorientable(SurfaceClass::non_orientable(g), n, &mut cache).unwrap();
        assert_eq!(got.to_string(), want, "genus {g}, n={n}");
    }
}

#[test]
fn lookup_finds_known_entries() {
    assert_eq!(lookup(true, 1, 5), Some("320"));
    assert_eq!(lookup(false, 3, 5), Some("1890"));
    assert_eq!(lookup(true, 3, 2), Some("0"));
    assert_eq!(lookup(true, 11, 2), None);
    assert_eq!(lookup(false, 1, 15), None);
}
