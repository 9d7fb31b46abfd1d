use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn orbimap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbimap")).args(args).env_remove("ORBIMAP_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbimap-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Rewrites every count in a cache file, keeping keys and header.
fn scale_cache(from: &PathBuf, to: &PathBuf, factor: u64) {
    let text = fs::read_to_string(from).unwrap();
    let mut lines = text.lines();
    let mut out = format!("{}\n", lines.next().unwrap());
    for l in lines {
        let (k, v) = l.split_once('\t').unwrap();
        let v: u128 = v.parse().unwrap();
        out.push_str(&format!("{k}\t{}\n", v * factor as u128));
    }
    fs::write(to, out).unwrap();
}

/// Doubles the first nonempty table in a cache file. Its cell records and
/// its total (key suffixes `43..` and `54` after the table prefix) change
/// together, so the cache still accepts the table.
fn double_first_table(from: &PathBuf, to: &PathBuf) {
    let text = fs::read_to_string(from).unwrap();
    let recs: Vec<(&str, &str)> = text.lines().skip(1).map(|l| l.split_once('\t').unwrap()).collect();
    let (total, _) = *recs.iter().find(|(k, v)| k.ends_with("54") && *v != "0").unwrap();
    let base = &total[..total.len() - 2];
    let mut out = format!("{}\n", text.lines().next().unwrap());
    for (k, v) in recs {
        let hit = k == total || (k.len() == base.len() + 6 && k.starts_with(&format!("{base}43")));
        let v: u128 = v.parse().unwrap();
        out.push_str(&format!("{k}\t{}\n", if hit { 2 * v } else { v }));
    }
    fs::write(to, out).unwrap();
}

#[test]
fn count_plain() {
    let o = orbimap(&["count", "--orientable", "--genus", "1", "--edges", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "320\n");
    let o = orbimap(&["count", "--non-orientable", "--genus", "3", "--edges", "5", "--unsensed"]);
    assert_eq!(stdout(&o), "1890\n");
}

#[test]
fn count_formats() {
    let o = orbimap(&["count", "--orientable", "--genus", "1", "--edges", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], "6");
    assert_eq!(v["flavor"], "unsensed");
    assert_eq!(v["surface"]["genus"], 1);
    assert!(!v["terms"].as_array().unwrap().is_empty());
    let o = orbimap(&["count", "--orientable", "--genus", "1", "--edges", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,genus_1\n3,6\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["count", "--non-orientable", "--genus", "1", "--edges", "2", "--sensed"][..],
        &["count", "--orientable", "--edges", "2"],
        &["count", "--orientable", "--genus", "1", "--edges", "0"],
        &["count", "--orientable", "--genus", "1", "--edges", "2", "--format", "xml"],
        &["count", "--non-orientable", "--genus", "0", "--edges", "2"],
        &["verify"],
    ] {
        let o = orbimap(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_csv() {
    let o = orbimap(&["table", "--orientable", "--genus", "2", "--edges-max", "5", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,genus_1,genus_2\n1,0,0\n2,1,0\n3,6,0\n4,40,4\n5,320,76\n");
}

#[test]
fn census_csv() {
    let o = orbimap(&["census", "--chi", "-1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("covering_chi,l,orientable,chi_orbifold,h,branch_indices,epi,epi_plus"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn verify_suites_pass() {
    for suite in ["oracle", "internal-consistency"] {
        let o = orbimap(&["verify", "--suite", suite, "--max-edges", "3"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains(" 0 failed"));
    }
}

#[test]
fn cache_round_trip() {
    let dir = scratch("cache");
    let path = dir.join("cache.txt");
    let args = ["count", "--non-orientable", "--genus", "2", "--edges", "5", "--format", "json"];
    let cold = orbimap(&[&args[..], &["--cache", path.to_str().unwrap()]].concat());
    assert!(fs::read_to_string(&path).unwrap().starts_with("orbimap-cache v1\n"));
    let warm = Command::new(env!("CARGO_BIN_EXE_orbimap")).args(args).env("ORBIMAP_CACHE", &path).output().unwrap();
    assert_eq!(stdout(&cold), stdout(&warm));

    // an unreadable cache is ignored with a warning
    fs::write(&path, "orbimap-cache v1\nnot a record\n").unwrap();
    let o = orbimap(&[&args[..], &["--cache", path.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert_eq!(stdout(&o), stdout(&cold));
    assert!(!o.stderr.is_empty());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn poisoned_cache_exit_codes() {
    let dir = scratch("poison");
    let good = dir.join("good.txt");
    let o = orbimap(&["verify", "--suite", "paper-tables", "--max-edges", "3", "--cache", good.to_str().unwrap()]);
    assert!(o.status.success());

    // scaled counts keep every division exact but change the answers
    let wrong = dir.join("wrong.txt");
    scale_cache(&good, &wrong, 48);
    let o = orbimap(&["verify", "--suite", "paper-tables", "--max-edges", "3", "--cache", wrong.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    // one doubled table breaks the Burnside divisions
    let broken = dir.join("broken.txt");
    double_first_table(&good, &broken);
    let o = orbimap(&["verify", "--suite", "paper-tables", "--max-edges", "3", "--cache", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    fs::remove_dir_all(&dir).unwrap();
}
