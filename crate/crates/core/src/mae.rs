//! Word vectors and the misspelling average embedding: a misspelt token is
//! represented by the mean of its own vector and its correction's vector.
//!
//! Embedding text format (UTF-8): a header line `<count> <dim>`, then one
//! line per word, the word followed by `dim` space-separated decimals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detector::correct;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

/// Word-to-vector table. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl EmbeddingStore {
    /// Builds a store from (word, vector) rows in order.
    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = (String, Vec<f64>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        let mut store = EmbeddingStore {
            dim,
            words: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
        };
        for (i, (word, vector)) in rows.into_iter().enumerate() {
            store
                .push(word, vector)
                .map_err(|msg| Error::invalid(format!("row {}: {msg}", i + 1)))?;
        }
        Ok(store)
    }

    fn push(&mut self, word: String, vector: Vec<f64>) -> std::result::Result<(), String> {
        if vector.len() != self.dim {
            return Err(format!(
                "`{word}` has {} components, expected {}",
                vector.len(),
                self.dim
            ));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(format!("`{word}` has a non-finite component"));
        }
        if self.index.contains_key(&word) {
            return Err(format!("duplicate word `{word}`"));
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.vectors.push(vector);
        Ok(())
    }

    pub fn parse(text: &str, context: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(context, 1, "missing `<count> <dim>` header"))?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let (count, dim) = match head.as_slice() {
            [c, d] => match (c.parse::<usize>(), d.parse::<usize>()) {
                (Ok(c), Ok(d)) if d > 0 => (c, d),
                _ => return Err(Error::parse(context, 1, "header must be `<count> <dim>` with dim > 0")),
            },
            _ => return Err(Error::parse(context, 1, "header must be `<count> <dim>`")),
        };

        let mut store = EmbeddingStore::from_rows(dim, std::iter::empty())?;
        for (idx, line) in lines {
            let line_no = idx + 1;
            let mut fields = line.split_whitespace();
            let word = fields.next().expect("non-blank line").to_string();
            let vector = fields
                .map(str::parse::<f64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(context, line_no, format!("bad number: {e}")))?;
            store
                .push(word, vector)
                .map_err(|msg| Error::parse(context, line_no, msg))?;
        }
        if store.len() != count {
            return Err(Error::parse(
                context,
                1,
                format!("header declares {count} words, found {}", store.len()),
            ));
        }
        Ok(store)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| self.vectors[i].as_slice())
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// Text form, rows in insertion order, six decimals per component.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.dim);
        for (word, vector) in self.words.iter().zip(&self.vectors) {
            out.push_str(word);
            for v in vector {
                write!(out, " {v:.6}").expect("write to string");
            }
            out.push('\n');
        }
        out
    }
}

pub fn load_embeddings(path: impl AsRef<Path>) -> Result<EmbeddingStore> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    EmbeddingStore::parse(&text, &path.display().to_string())
}

/// Stored vector, or zeros when the token is out of vocabulary. The flag is
/// true for out-of-vocabulary tokens.
pub fn embed_token(store: &EmbeddingStore, token: &str) -> (Vec<f64>, bool) {
    match store.get(token) {
        Some(v) => (v.to_vec(), false),
        None => (vec![0.0; store.dim], true),
    }
}

/// Mean of the token's vector and its correction's vector. Tokens the
/// lexicon leaves unchanged get their own vector back exactly.
pub fn mae_vector(store: &EmbeddingStore, token: &str, lex: &Lexicon) -> Vec<f64> {
    let (own, _) = embed_token(store, token);
    let corrected = correct(token, lex);
    if corrected == token {
        return own;
    }
    let (norm, _) = embed_token(store, &corrected);
    own.iter().zip(&norm).map(|(a, b)| (a + b) / 2.0).collect()
}

/// Pairs every misspelt subtoken with a normalized subtoken. A shorter
/// normalized list is padded by repeating its first subtoken at the front;
/// a longer one is cut at the tail.
pub fn align_subtokens(misp: &[String], norm: &[String]) -> Result<Vec<(String, String)>> {
    if misp.is_empty() || norm.is_empty() {
        return Err(Error::invalid("subtoken lists must be non-empty"));
    }
    let pad = misp.len().saturating_sub(norm.len());
    let padded = std::iter::repeat_n(&norm[0], pad).chain(norm.iter());
    Ok(misp.iter().cloned().zip(padded.cloned()).collect())
}

/// Uniform random vectors in [-1, 1) for each word, in order. Duplicate
/// words keep their first position.
pub fn gen_embeddings(vocab: &[String], dim: usize, seed: u64) -> Result<EmbeddingStore> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut rows = Vec::with_capacity(vocab.len());
    for word in vocab {
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!("vocabulary word `{word}` is empty or has whitespace")));
        }
        if !seen.insert(word.as_str()) {
            continue;
        }
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        rows.push((word.clone(), v));
    }
    EmbeddingStore::from_rows(dim, rows)
}

/// One word per line; blank lines and `#` comments skipped.
pub fn parse_vocab(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
