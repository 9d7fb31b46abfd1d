//! `orbimap`: count maps on closed surfaces from the command line.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use orbimap::assembly::{count_maps, torus_crosscheck, unsensed_any, Flavor, MapCountQuery};
use orbimap::brute_oracle::golden_records;
use orbimap::orbifold_census::{census_for_chi, SurfaceClass, CENSUS_CSV_HEADER};
use orbimap::quotient_dp::CountCache;
use orbimap::{reference, OrbimapError};

#[derive(Parser)]
#[command(name = "orbimap", version, about = "Exact counts of maps on closed surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count maps on one surface with a fixed number of edges.
    Count(CountArgs),
    /// Counts for genus 1..=G and a range of edge counts.
    Table(TableArgs),
    /// Cyclic orbifolds covered by surfaces of one Euler characteristic.
    Census(CensusArgs),
    /// Run a self-check suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Suite {
    PaperTables,
    Oracle,
    InternalConsistency,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Orientable surface (the default).
    #[arg(long, conflicts_with = "non_orientable")]
    orientable: bool,
    /// Non-orientable surface; genus counts crosscaps.
    #[arg(long)]
    non_orientable: bool,
}

#[derive(Args)]
struct FlavorArgs {
    /// Up to orientation-preserving homeomorphisms.
    #[arg(long, conflicts_with = "unsensed")]
    sensed: bool,
    /// Up to all homeomorphisms (the default).
    #[arg(long)]
    unsensed: bool,
}

impl FlavorArgs {
    fn flavor(&self) -> Flavor {
        if self.sensed {
            Flavor::Sensed
        } else {
            Flavor::Unsensed
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
    /// Persistent count cache; falls back to $ORBIMAP_CACHE.
    #[arg(long, env = "ORBIMAP_CACHE")]
    cache: Option<PathBuf>,
    /// Worker threads for quotient tables.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    jobs: u64,
    /// Memo entries allowed per engine before giving up.
    #[arg(long, default_value_t = 20_000_000)]
    max_states: usize,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    genus: u32,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    edges: u64,
    #[command(flatten)]
    flavor: FlavorArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Largest genus; columns run from genus 1.
    #[arg(long)]
    genus: u32,
    /// Smallest edge count.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    edges: u64,
    /// Largest edge count.
    #[arg(long)]
    edges_max: u64,
    #[command(flatten)]
    flavor: FlavorArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CensusArgs {
    /// Euler characteristic of the covering surface.
    #[arg(long, allow_hyphen_values = true)]
    chi: i64,
    /// Largest period. Defaults to 8 - 2χ for negative χ and 12 otherwise.
    #[arg(long)]
    max_period: Option<u64>,
    /// Keep closed orientable quotients too.
    #[arg(long)]
    all: bool,
    #[arg(long, value_enum, default_value = "plain")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Largest edge count to check.
    #[arg(long)]
    max_edges: Option<u64>,
    #[command(flatten)]
    common: Common,
}

/// Failures mapped to exit codes.
enum Failure {
    Usage(String),
    Internal(String),
    Mismatch,
    /// The reader went away; nothing left to say.
    ClosedPipe,
}

impl From<OrbimapError> for Failure {
    fn from(e: OrbimapError) -> Self {
        match e {
            OrbimapError::NonIntegral { .. } | OrbimapError::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Usage(e.to_string())
    }
}

fn surface(s: &SurfaceArgs, genus: u32) -> Result<SurfaceClass, Failure> {
    if s.non_orientable {
        if genus == 0 {
            return Err(Failure::Usage("non-orientable surfaces have genus >= 1".into()));
        }
        Ok(SurfaceClass::non_orientable(genus))
    } else {
        Ok(SurfaceClass::orientable(genus))
    }
}

fn open_cache(c: &Common) -> CountCache {
    let Some(path) = &c.cache else { return CountCache::with_max_states(c.max_states) };
    match CountCache::load(path) {
        Ok(cache) => CountCache::from_records(cache.into_records(), c.max_states),
        Err(e) => {
            eprintln!("warning: ignoring cache {}: {e}", path.display());
            CountCache::with_max_states(c.max_states)
        }
    }
}

fn close_cache(c: &Common, cache: &CountCache) {
    if let Some(path) = &c.cache {
        if cache.is_dirty() {
            if let Err(e) = cache.save(path) {
                eprintln!("warning: could not write cache {}: {e}", path.display());
            }
        }
    }
}

fn cmd_count(a: &CountArgs, out: &mut impl Write) -> Result<(), Failure> {
    let s = surface(&a.surface, a.genus)?;
    let q = MapCountQuery::new(s, a.edges, a.flavor.flavor())?;
    let mut cache = open_cache(&a.common);
    let r = count_maps(&q, a.common.jobs as usize, &mut cache);
    close_cache(&a.common, &cache);
    let r = r?;
    match a.common.format {
        Format::Plain => writeln!(out, "{}", r.count)?,
        Format::Csv => writeln!(out, "n,genus_{}\n{},{}", a.genus, a.edges, r.count)?,
        Format::Json => writeln!(out, "{}", r.to_json())?,
    }
    Ok(())
}

fn cmd_table(a: &TableArgs, out: &mut impl Write) -> Result<(), Failure> {
    surface(&a.surface, a.genus.max(1))?;
    let flavor = a.flavor.flavor();
    if flavor == Flavor::Sensed && a.surface.non_orientable {
        return Err(Failure::Usage("sensed counts need an orientable surface".into()));
    }
    let genera: Vec<u32> = (1..=a.genus).collect();
    let mut cache = open_cache(&a.common);
    let mut rows = Vec::new();
    let mut json = Vec::new();
    let result = (|| -> Result<(), Failure> {
        for n in a.edges..=a.edges_max {
            let mut row = Vec::new();
            for &g in &genera {
                let q = MapCountQuery::new(surface(&a.surface, g)?, n, flavor)?;
                let r = count_maps(&q, a.common.jobs as usize, &mut cache)?;
                row.push(r.count.to_string());
                json.push(r.to_json());
            }
            rows.push((n, row));
        }
        Ok(())
    })();
    close_cache(&a.common, &cache);
    result?;
    let header: Vec<String> = genera.iter().map(|g| format!("genus_{g}")).collect();
    match a.common.format {
        Format::Csv => {
            writeln!(out, "n{}", header.iter().map(|h| format!(",{h}")).collect::<String>())?;
            for (n, row) in &rows {
                writeln!(out, "{n}{}", row.iter().map(|v| format!(",{v}")).collect::<String>())?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::Value::Array(json))?,
        Format::Plain => {
            let width = rows.iter().flat_map(|(_, r)| r.iter().map(String::len)).chain(header.iter().map(String::len)).max().unwrap_or(1);
            write!(out, "{:>3}", "n")?;
            for h in &header {
                write!(out, " {h:>width$}")?;
            }
            writeln!(out)?;
            for (n, row) in &rows {
                write!(out, "{n:>3}")?;
                for v in row {
                    write!(out, " {v:>width$}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

fn cmd_census(a: &CensusArgs, out: &mut impl Write) -> Result<(), Failure> {
    if a.chi > 2 {
        return Err(Failure::Usage(format!("no closed surface has Euler characteristic {}", a.chi)));
    }
    let max_l = a.max_period.unwrap_or(if a.chi < 0 { (8 - 2 * a.chi) as u64 } else { 12 });
    if max_l == 0 {
        return Err(Failure::Usage("--max-period must be positive".into()));
    }
    let rows: Vec<_> = census_for_chi(a.chi, max_l).into_iter().filter(|r| a.all || !r.signature.is_closed_orientable()).collect();
    match a.format {
        Format::Csv => {
            writeln!(out, "{CENSUS_CSV_HEADER}")?;
            for r in &rows {
                writeln!(out, "{}", r.to_csv())?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::Value::Array(rows.iter().map(|r| r.to_json()).collect()))?,
        Format::Plain => {
            writeln!(out, "{:>4} {:>4} {:>2} {:>4} {:>3}  {:<16} {:>8} {:>8}", "X", "l", "±", "chi", "h", "m_i", "epi", "epi+")?;
            for r in &rows {
                let s = &r.signature;
                let ms: Vec<String> = s.branch_indices.iter().map(u64::to_string).collect();
                writeln!(
                    out,
                    "{:>4} {:>4} {:>2} {:>4} {:>3}  {:<16} {:>8} {:>8}",
                    r.covering_chi,
                    r.l,
                    if s.orientable { "+" } else { "-" },
                    s.surface_chi(),
                    s.boundaries,
                    format!("[{}]", ms.join(" ")),
                    r.epi,
                    r.epi_plus
                )?;
            }
        }
    }
    Ok(())
}

/// Collects check results and prints one line per check.
struct Report<'a, W: Write> {
    out: &'a mut W,
    failed: usize,
    passed: usize,
}

impl<W: Write> Report<'_, W> {
    fn check(&mut self, name: &str, ok: bool, detail: &str, repro: &str) -> Result<(), Failure> {
        if ok {
            self.passed += 1;
            writeln!(self.out, "PASS {name}")?;
        } else {
            self.failed += 1;
            writeln!(self.out, "FAIL {name}: {detail}\n     reproduce: {repro}")?;
        }
        Ok(())
    }
}

fn count_cmd(s: SurfaceClass, n: u64, f: Flavor) -> String {
    let o = if s.orientable { "--orientable" } else { "--non-orientable" };
    format!("orbimap count {o} --genus {} --edges {n} --{}", s.genus, f.as_str())
}

fn cmd_verify(a: &VerifyArgs, out: &mut impl Write) -> Result<(), Failure> {
    let mut cache = open_cache(&a.common);
    let jobs = a.common.jobs as usize;
    let mut report = Report { out, failed: 0, passed: 0 };
    let result = (|| -> Result<(), Failure> {
        match a.suite {
            Suite::PaperTables => {
                let max = a.max_edges.unwrap_or(8);
                for (orientable, rows) in [(true, reference::ORIENTABLE), (false, reference::NON_ORIENTABLE)] {
                    for &(g, n, want) in rows.iter().filter(|r| r.1 <= max) {
                        let s = if orientable { SurfaceClass::orientable(g) } else { SurfaceClass::non_orientable(g) };
                        let got = count_maps(&MapCountQuery::new(s, n, Flavor::Unsensed)?, jobs, &mut cache)?.count.to_string();
                        let name = format!("{s}, {n} edges = {want}");
                        report.check(&name, got == want, &format!("computed {got}"), &count_cmd(s, n, Flavor::Unsensed))?;
                    }
                }
            }
            Suite::Oracle => {
                let max = a.max_edges.unwrap_or(3);
                for r in golden_records(max)? {
                    let mut flavors = vec![(Flavor::Unsensed, r.unsensed.clone())];
                    if let Some(s) = &r.sensed {
                        flavors.push((Flavor::Sensed, s.clone()));
                    }
                    for (f, want) in flavors {
                        let got = count_maps(&MapCountQuery::new(r.surface, r.n_edges, f)?, jobs, &mut cache)?.count.to_string();
                        let name = format!("{} {}, {} edges = {want} (enumerated)", f.as_str(), r.surface, r.n_edges);
                        report.check(&name, got == want, &format!("computed {got}"), &count_cmd(r.surface, r.n_edges, f))?;
                    }
                }
            }
            Suite::InternalConsistency => {
                let max = a.max_edges.unwrap_or(8);
                for n in 1..=max {
                    let torus = SurfaceClass::orientable(1);
                    let want = count_maps(&MapCountQuery::new(torus, n, Flavor::Unsensed)?, jobs, &mut cache)?.count;
                    let got = torus_crosscheck(n, &mut cache)?;
                    report.check(
                        &format!("torus formula, {n} edges"),
                        got == want,
                        &format!("formula {got}, Burnside {want}"),
                        &count_cmd(torus, n, Flavor::Unsensed),
                    )?;
                }
                for g in 0..=3u32 {
                    for n in 1..=max {
                        let s = SurfaceClass::orientable(g);
                        let u = count_maps(&MapCountQuery::new(s, n, Flavor::Unsensed)?, jobs, &mut cache)?.count;
                        let t = count_maps(&MapCountQuery::new(s, n, Flavor::Sensed)?, jobs, &mut cache)?.count;
                        let ok = u <= t && t <= &u * 2u32;
                        report.check(
                            &format!("{s}, {n} edges: unsensed <= sensed <= 2 unsensed"),
                            ok,
                            &format!("unsensed {u}, sensed {t}"),
                            &count_cmd(s, n, Flavor::Sensed),
                        )?;
                    }
                }
                for chi in -2..=2i64 {
                    for n in 1..=max.min(6) {
                        let both = unsensed_any(chi, n, &mut cache)?;
                        let mut parts = BigUint::from(0u32);
                        if chi % 2 == 0 {
                            let s = SurfaceClass::orientable(((2 - chi) / 2) as u32);
                            parts += count_maps(&MapCountQuery::new(s, n, Flavor::Unsensed)?, jobs, &mut cache)?.count;
                        }
                        if chi <= 1 {
                            let s = SurfaceClass::non_orientable((2 - chi) as u32);
                            parts += count_maps(&MapCountQuery::new(s, n, Flavor::Unsensed)?, jobs, &mut cache)?.count;
                        }
                        report.check(
                            &format!("chi {chi}, {n} edges: both surfaces add up"),
                            both == parts,
                            &format!("combined {both}, parts {parts}"),
                            &format!("orbimap census --chi {chi} --all"),
                        )?;
                    }
                }
            }
        }
        Ok(())
    })();
    close_cache(&a.common, &cache);
    result?;
    writeln!(report.out, "{} passed, {} failed", report.passed, report.failed)?;
    if report.failed > 0 {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let r = match &cli.command {
        Command::Count(a) => cmd_count(a, &mut out),
        Command::Table(a) => cmd_table(a, &mut out),
        Command::Census(a) => cmd_census(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
    };
    match r {
        Ok(()) | Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
