//! Prints oracle counts for closed maps as JSON lines.
//!
//! `cargo run --release --example golden -- 4 > tests/data/golden.jsonl`
use orbimap::brute_oracle::{golden_records, write_golden};

fn main() -> Result<(), orbimap::OrbimapError> {
    let max: u64 = std::env::args().nth(1).map_or(Ok(4), |s| s.parse()).expect("edge bound");
    write_golden(&golden_records(max)?, std::io::stdout().lock())
}
