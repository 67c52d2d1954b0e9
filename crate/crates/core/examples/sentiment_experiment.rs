//! Trains the sentiment classifier under every feature mode on the synthetic
//! corpus and prints held-out micro-F1.
//!
//! ```text
//! cargo run --release --example sentiment_experiment [seed]
//! ```

use thaimisp::synthetic::{build, run_all_modes, SyntheticConfig};
use thaimisp::TrainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = SyntheticConfig::default();
    if let Some(seed) = std::env::args().nth(1) {
        cfg.seed = seed.parse()?;
    }
    let corpus = build(&cfg)?;
    println!("train {} / test {} sentences, dim {}", corpus.train.len(), corpus.test.len(), cfg.dim);
    for (mode, report) in run_all_modes(&corpus, TrainConfig::default())? {
        println!("{:<8} micro-F1 {:.4}", mode.as_str(), report.micro_f1);
    }
    Ok(())
}
