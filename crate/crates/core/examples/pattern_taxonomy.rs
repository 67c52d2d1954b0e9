//! Classifies (misspelt, corrected, intention) triples and shows which rule fired.
//!
//! ```text
//! cargo run --example pattern_taxonomy
//! cargo run --example pattern_taxonomy -- pairs.tsv
//! ```

use thaimisp::patterns::{classify_pattern_traced, cluster_diff};
use thaimisp::Intention;

const DEFAULT: &str = include_str!("../tests/fixtures/pattern_pairs.tsv");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split('\t').collect();
        let intention: Intention = cols[2].parse()?;
        let (label, trace) = classify_pattern_traced(cols[0], cols[1], intention)?;
        let diff = cluster_diff(cols[0], cols[1]);
        println!(
            "{:<16} {:<22} {:<13} {:<22} rule {:?} (+{} -{} ~{})",
            cols[0],
            cols[1],
            intention,
            label,
            trace.last().expect("non-empty trace").rule,
            diff.insertions().len(),
            diff.deletions().len(),
            diff.substitutions().len(),
        );
    }
    Ok(())
}
