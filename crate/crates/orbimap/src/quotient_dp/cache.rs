//! Memo tables shared by every quotient count, with optional persistence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::Zero;

use super::engine::{Engine, EngineConfig, Mode, QuotientKey, Root};
use crate::error::OrbimapError;

/// First line of every cache file.
pub const CACHE_HEADER: &str = "orbimap-cache v1";

/// Rooted counts keyed by `(interior cells, semiedges)`.
pub type CellCounts = BTreeMap<(usize, usize), BigUint>;

/// Engines for both modes plus a persistent record of finished flag tables.
///
/// Records map hex-encoded canonical keys to decimal counts. A table is
/// stored as one record per nonzero cell plus a total record that marks it
/// complete. Engines are single threaded; parallel callers use one cache per
/// worker and [`CountCache::merge`] afterwards.
pub struct CountCache {
    orientable: Option<Engine>,
    combined: Option<Engine>,
    records: BTreeMap<String, BigUint>,
    max_states: usize,
    dirty: bool,
}

impl Default for CountCache {
    fn default() -> Self {
        CountCache::new()
    }
}

fn table_key(mode: Mode, n: u8, chi_hat: i8, h: u8) -> Vec<u8> {
    QuotientKey::plain(mode, n, chi_hat, Root::Flag, h).to_bytes()
}

impl CountCache {
    pub fn new() -> Self {
        CountCache::with_max_states(EngineConfig::new(Mode::Orientable).max_states)
    }

    /// A cache whose engines give up after `max_states` memo entries.
    pub fn with_max_states(max_states: usize) -> Self {
        CountCache { orientable: None, combined: None, records: BTreeMap::new(), max_states, dirty: false }
    }

    /// A fresh cache holding `records`, for handing work to another thread.
    pub fn from_records(records: BTreeMap<String, BigUint>, max_states: usize) -> Self {
        CountCache { records, ..CountCache::with_max_states(max_states) }
    }

    pub fn into_records(self) -> BTreeMap<String, BigUint> {
        self.records
    }

    pub fn max_states(&self) -> usize {
        self.max_states
    }

    /// Loads a cache file. A missing file or a different version header
    /// gives an empty cache.
    pub fn load(path: &Path) -> Result<Self, OrbimapError> {
        let mut cache = CountCache::new();
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        let mut lines = text.lines();
        if lines.next() != Some(CACHE_HEADER) {
            return Ok(cache);
        }
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let bad = || OrbimapError::Invalid(format!("{}: malformed cache line {}", path.display(), i + 2));
            let (k, v) = line.split_once('\t').ok_or_else(bad)?;
            if k.is_empty() || !k.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(bad());
            }
            let v: BigUint = v.parse().map_err(|_| bad())?;
            cache.records.insert(k.to_string(), v);
        }
        Ok(cache)
    }

    /// Writes all records, sorted by key, replacing `path` atomically.
    pub fn save(&self, path: &Path) -> Result<(), OrbimapError> {
        let mut out = String::from(CACHE_HEADER);
        out.push('\n');
        for (k, v) in &self.records {
            let _ = writeln!(out, "{k}\t{v}");
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, out)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// True if records were added since the cache was created or loaded.
    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Absorbs another worker's records. Both sides compute the same values,
    /// so a disagreement means something is badly wrong.
    pub fn merge(&mut self, other: &CountCache) -> Result<(), OrbimapError> {
        self.merge_records(&other.records)
    }

    pub fn merge_records(&mut self, records: &BTreeMap<String, BigUint>) -> Result<(), OrbimapError> {
        for (k, v) in records {
            match self.records.get(k) {
                Some(old) if old != v => {
                    return Err(OrbimapError::Invariant(format!("cache records disagree at {k}: {old} vs {v}")))
                }
                Some(_) => {}
                None => {
                    self.records.insert(k.clone(), v.clone());
                    self.dirty = true;
                }
            }
        }
        Ok(())
    }

    /// Drops the in-memory engines and every record.
    pub fn clear(&mut self) {
        *self = CountCache::with_max_states(self.max_states);
    }

    /// Raw records, for inspection and tests.
    pub fn records(&self) -> &BTreeMap<String, BigUint> {
        &self.records
    }

    fn engine(&mut self, mode: Mode) -> &mut Engine {
        let slot = match mode {
            Mode::Orientable => &mut self.orientable,
            Mode::Combined => &mut self.combined,
        };
        let max_states = self.max_states;
        slot.get_or_insert_with(|| Engine::new(EngineConfig { max_states, ..EngineConfig::new(mode) }))
    }

    /// Runs `f` on the engine for `mode`, turning an exhausted budget into an
    /// error and discarding the spoiled engine.
    pub fn with_engine<T>(&mut self, mode: Mode, f: impl FnOnce(&mut Engine) -> T) -> Result<T, OrbimapError> {
        let engine = self.engine(mode);
        let out = f(engine);
        if engine.over_budget() {
            let states = engine.states();
            match mode {
                Mode::Orientable => self.orientable = None,
                Mode::Combined => self.combined = None,
            }
            return Err(OrbimapError::SizeLimit(format!(
                "budget exceeded: {states} quotient states (limit {})",
                self.max_states
            )));
        }
        Ok(out)
    }

    /// Flag-rooted counts with `n` darts on surfaces of capped
    /// characteristic `chi_hat` with `h` boundary components.
    pub fn flag_table(&mut self, mode: Mode, n: u8, chi_hat: i8, h: u8) -> Result<CellCounts, OrbimapError> {
        let base = table_key(mode, n, chi_hat, h);
        let total_key = hex::encode([&base[..], b"T"].concat());
        let cell_prefix = hex::encode([&base[..], b"C"].concat());
        if let Some(total) = self.records.get(&total_key) {
            let mut out = CellCounts::new();
            for (k, v) in self.records.range(cell_prefix.clone()..) {
                let Some(rest) = k.strip_prefix(&cell_prefix) else { break };
                if rest.len() != 4 {
                    continue;
                }
                let (c, s) = (u8::from_str_radix(&rest[..2], 16), u8::from_str_radix(&rest[2..], 16));
                if let (Ok(c), Ok(s)) = (c, s) {
                    out.insert((c as usize, s as usize), v.clone());
                }
            }
            let sum: BigUint = out.values().sum();
            if &sum == total {
                return Ok(out);
            }
        }
        let table = self.with_engine(mode, |e| e.flag_rooted(n, chi_hat, h))?;
        let mut out = CellCounts::new();
        let mut total = BigUint::zero();
        for (c, s, v) in table.entries() {
            let v = BigUint::from(v);
            total += &v;
            let key = hex::encode([&base[..], b"C", &[c as u8, s as u8]].concat());
            self.records.insert(key, v.clone());
            out.insert((c, s), v);
        }
        self.records.insert(total_key, total);
        self.dirty = true;
        Ok(out)
    }

    /// Counts on one bordered surface with `n` darts: orientable tables come
    /// straight from the orientable engine, non-orientable ones are the
    /// combined table minus the orientable one.
    pub fn surface_table(&mut self, orientable: bool, chi_hat: i8, h: u8, n: u8) -> Result<CellCounts, OrbimapError> {
        let even = chi_hat % 2 == 0;
        if orientable {
            if !even {
                return Ok(CellCounts::new());
            }
            return self.flag_table(Mode::Orientable, n, chi_hat, h);
        }
        let mut all = self.flag_table(Mode::Combined, n, chi_hat, h)?;
        if even {
            for (cell, v) in self.flag_table(Mode::Orientable, n, chi_hat, h)? {
                let slot = all.entry(cell).or_default();
                if *slot < v {
                    return Err(OrbimapError::Invariant(format!(
                        "orientable count exceeds combined count at n={n}, chi_hat={chi_hat}, h={h}, cell {cell:?}"
                    )));
                }
                *slot -= v;
            }
            all.retain(|_, v| !v.is_zero());
        }
        Ok(all)
    }
}
