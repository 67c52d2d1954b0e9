//! Segments sentences with the bundled lexicon and prints each token with its
//! tag and correction.
//!
//! ```text
//! cargo run --example segment_and_detect [sentence ...]
//! ```

use thaimisp::{correct, detect, segment, Lexicon};

fn main() {
    let lex = Lexicon::bundled();
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = vec!["กุไปกินข้าวมากกก 5555".into(), "ร้านนี้อร่อยค่ะ".into(), "ชิมิ ไปป่าว".into()];
    }
    for text in &inputs {
        println!("{text}");
        for token in segment(text, &lex).tokens {
            let tag = detect(&token, &lex);
            println!("  {token:<12} {:<5} {}", tag.name(), correct(&token, &lex));
        }
    }
}
