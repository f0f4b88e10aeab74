//! Writes the bundled synthetic index: 420 months of weekday closes.
//!
//!     cargo run -p radial-core --example make_fixture -- crates/cli/fixtures/synthetic_index.csv

use std::fs::File;
use std::io::BufWriter;

use radial_core::backtest::fixtures::synthetic_index;

fn main() -> radial_core::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "synthetic_index.csv".to_string());
    synthetic_index(420, 2021).write_csv(BufWriter::new(File::create(&path)?))
}
