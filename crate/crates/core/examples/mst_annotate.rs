//! Inserts misspelling tag tokens after each flagged token.

use thaimisp::{annotate, segment, Lexicon, MispTag};

fn main() -> Result<(), thaimisp::Error> {
    let lex = Lexicon::bundled();
    let text = std::env::args().nth(1).unwrap_or_else(|| "กุไปกินข้าวมากกก 5555 ค่ะ".into());
    let sentence = segment(&text, &lex);
    let augmented = annotate(&sentence, &lex)?;
    println!("{}", augmented.tokens.join(" "));
    for tag in MispTag::EMITTED {
        println!("{:<4} {}", tag.name(), augmented.count(tag));
    }
    assert_eq!(augmented.strip_tags(), sentence.tokens);
    Ok(())
}
