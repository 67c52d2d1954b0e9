//! Builds random embeddings over the bundled vocabulary and shows how the
//! averaged vector of a misspelt token sits between its own vector and the
//! vector of its correction.

use thaimisp::mae::gen_embeddings;
use thaimisp::{correct, embed_token, mae_vector, Lexicon};

fn show(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:+.3}")).collect::<Vec<_>>().join(" ")
}

fn main() -> Result<(), thaimisp::Error> {
    let lex = Lexicon::bundled();
    let mut vocab: Vec<String> = lex.wordlist().map(str::to_string).collect();
    vocab.extend(lex.entries().map(|e| e.misspelt.clone()));
    let store = gen_embeddings(&vocab, 4, 7)?;

    for token in ["กุ", "มากกก", "ค่ะ", "กิน", "ไม่มีในคลัง"] {
        let fixed = correct(token, &lex);
        let (own, oov) = embed_token(&store, token);
        println!("{token} -> {fixed}{}", if oov { " (oov)" } else { "" });
        println!("  own   {}", show(&own));
        println!("  fixed {}", show(&embed_token(&store, &fixed).0));
        println!("  mae   {}", show(&mae_vector(&store, token, &lex)));
    }
    Ok(())
}
