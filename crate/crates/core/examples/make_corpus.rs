//! Writes a synthetic corpus in the input format the `litrank` binary
//! ingests: article, reference, author, affiliation, field, and venue
//! tables, plus judged pairs and an external-records file for linking.
//!
//! Usage: `cargo run --release --example make_corpus -- <dir> [seed]`

use std::path::Path;
use std::process::ExitCode;

use litrank::synthetic::{generate, write_dataset, SyntheticParams};

fn main() -> ExitCode {
    let mut args = std::env::args().skip(1);
    let Some(dir) = args.next() else {
        eprintln!("usage: make_corpus <dir> [seed]");
        return ExitCode::from(2);
    };
    let seed: u64 = match args.next().map(|s| s.parse()).transpose() {
        Ok(seed) => seed.unwrap_or(0),
        Err(_) => {
            eprintln!("usage: make_corpus <dir> [seed]");
            return ExitCode::from(2);
        }
    };

    let ds = generate(&SyntheticParams {
        seed,
        ..Default::default()
    });
    if let Err(e) = write_dataset(&ds, Path::new(&dir)) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    println!(
        "wrote {} articles, {} references, {} judged pairs into {dir}",
        ds.table.len(),
        ds.refs.len(),
        ds.pairs.len()
    );
    ExitCode::SUCCESS
}
