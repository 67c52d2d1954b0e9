//! Misspelling dictionary and standard wordlist.
//!
//! The lexicon is the dictionary-based resource behind both detection and
//! correction: every key is a misspelt surface form, mapped to its standard
//! spelling, an intention label and (optionally) a pattern label. Lookups
//! are exact and context free.
//!
//! Lexicon TSV, UTF-8, no header:
//!
//! ```text
//! misspelt<TAB>corrected<TAB>intention<TAB>pattern
//! ```
//!
//! The pattern column may be omitted, which reads as `unlabeled`. The
//! wordlist is one word per line; lines starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patterns::PatternLabel;
use crate::thai_script::grapheme_clusters;

const BUNDLED_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUNDLED_WORDLIST: &str = include_str!("../data/wordlist.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intention {
    Intentional,
    Unintentional,
}

impl Intention {
    pub fn as_str(self) -> &'static str {
        match self {
            Intention::Intentional => "intentional",
            Intention::Unintentional => "unintentional",
        }
    }
}

impl FromStr for Intention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intentional" => Ok(Intention::Intentional),
            "unintentional" => Ok(Intention::Unintentional),
            other => Err(Error::invalid(format!("unknown intention `{other}`"))),
        }
    }
}

impl fmt::Display for Intention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub misspelt: String,
    pub corrected: String,
    pub intention: Intention,
    /// `None` when the row is unlabeled.
    pub pattern: Option<PatternLabel>,
}

/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
    wordlist: BTreeSet<String>,
    /// Longest vocabulary item, in clusters. Bounds segmentation lookahead.
    max_word_clusters: usize,
}

impl Lexicon {
    pub fn load(lexicon_path: impl AsRef<Path>, wordlist_path: impl AsRef<Path>) -> Result<Self> {
        let lexicon_path = lexicon_path.as_ref();
        let wordlist_path = wordlist_path.as_ref();
        let lexicon_text =
            std::fs::read_to_string(lexicon_path).map_err(|e| Error::io(lexicon_path, e))?;
        let wordlist_text =
            std::fs::read_to_string(wordlist_path).map_err(|e| Error::io(wordlist_path, e))?;
        Self::parse_named(
            &lexicon_text,
            &wordlist_text,
            &lexicon_path.display().to_string(),
            log::Level::Warn,
        )
    }

    pub fn parse(lexicon_text: &str, wordlist_text: &str) -> Result<Self> {
        Self::parse_named(lexicon_text, wordlist_text, "lexicon", log::Level::Warn)
    }

    /// The small curated dictionary shipped with the crate. Its `คะ`/`ค่ะ`
    /// pair corrects in both directions.
    pub fn bundled() -> Self {
        Self::parse_named(BUNDLED_LEXICON, BUNDLED_WORDLIST, "bundled lexicon", log::Level::Debug)
            .expect("bundled lexicon is valid")
    }

    fn parse_named(lexicon_text: &str, wordlist_text: &str, context: &str, chain_level: log::Level) -> Result<Self> {
        let wordlist = parse_wordlist(wordlist_text);
        let mut entries = BTreeMap::new();
        let mut first_seen: BTreeMap<String, usize> = BTreeMap::new();

        for (idx, raw) in lexicon_text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 && cols.len() != 3 {
                return Err(Error::parse(
                    context,
                    line_no,
                    format!("expected 4 tab-separated columns, found {}", cols.len()),
                ));
            }
            let misspelt = cols[0].trim();
            let corrected = cols[1].trim();
            if misspelt.is_empty() || misspelt.chars().any(char::is_whitespace) {
                return Err(Error::parse(
                    context,
                    line_no,
                    "misspelt form must be non-empty and contain no whitespace",
                ));
            }
            if corrected.is_empty() {
                return Err(Error::parse(context, line_no, "corrected form is empty"));
            }
            if misspelt == corrected {
                return Err(Error::parse(
                    context,
                    line_no,
                    format!("`{misspelt}` is identical to its correction"),
                ));
            }
            let intention: Intention = cols[2]
                .trim()
                .parse()
                .map_err(|e: Error| Error::parse(context, line_no, e.to_string()))?;
            let pattern = match cols.get(3).map(|s| s.trim()) {
                None | Some("unlabeled") => None,
                Some(label) => Some(
                    label
                        .parse::<PatternLabel>()
                        .map_err(|e| Error::parse(context, line_no, e.to_string()))?,
                ),
            };
            if !wordlist.contains(corrected) {
                return Err(Error::parse(
                    context,
                    line_no,
                    format!("corrected form `{corrected}` is not in the wordlist"),
                ));
            }
            if let Some(prev) = first_seen.get(misspelt) {
                return Err(Error::parse(
                    context,
                    line_no,
                    format!("duplicate misspelt key `{misspelt}` (first defined on line {prev})"),
                ));
            }
            first_seen.insert(misspelt.to_string(), line_no);
            entries.insert(
                misspelt.to_string(),
                LexiconEntry {
                    misspelt: misspelt.to_string(),
                    corrected: corrected.to_string(),
                    intention,
                    pattern,
                },
            );
        }

        for entry in entries.values() {
            if entries.contains_key(&entry.corrected) {
                log::log!(
                    chain_level,
                    "{context}: correction `{}` -> `{}` targets another misspelt key; \
                     correction is applied once and does not chain",
                    entry.misspelt,
                    entry.corrected
                );
            }
        }

        let max_word_clusters = wordlist
            .iter()
            .chain(entries.keys())
            .map(|w| grapheme_clusters(w).len())
            .max()
            .unwrap_or(0);

        Ok(Lexicon {
            entries,
            wordlist,
            max_word_clusters,
        })
    }

    pub fn lookup(&self, surface: &str) -> Option<&LexiconEntry> {
        self.entries.get(surface)
    }

    pub fn is_standard(&self, word: &str) -> bool {
        self.wordlist.contains(word)
    }

    pub fn is_misspelt_key(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Member of the segmentation vocabulary (wordlist or lexicon key).
    pub fn in_vocabulary(&self, word: &str) -> bool {
        self.is_standard(word) || self.is_misspelt_key(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn wordlist(&self) -> impl Iterator<Item = &str> {
        self.wordlist.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_word_clusters(&self) -> usize {
        self.max_word_clusters
    }
}

fn parse_wordlist(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORDS: &str = "# standard\nมาก\nครับ\nกู\n";

    #[test]
    fn parses_intentional_row() {
        let lex = Lexicon::parse("มากกก\tมาก\tintentional\tcharacter_repetition\n", WORDS).unwrap();
        let e = lex.lookup("มากกก").unwrap();
        assert_eq!(e.intention, Intention::Intentional);
        assert_eq!(e.corrected, "มาก");
        assert_eq!(e.pattern, Some(PatternLabel::CharacterRepetition));
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let err = Lexicon::parse(
            "กุ\tกู\tintentional\tvowel_substitution\nกุ\tกู\tintentional\tothers\n",
            WORDS,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("duplicate") && msg.contains("กุ") && msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn correction_must_be_standard() {
        let err = Lexicon::parse("คับ\tครับ\tintentional\tsimplifying\n", "มาก\n").unwrap_err();
        assert!(err.to_string().contains("not in the wordlist"));
    }

    #[test]
    fn malformed_rows() {
        let err = Lexicon::parse("กุ\tกู\n", WORDS).unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = Lexicon::parse("กุ\tกู\tintentional\tx\ty\n", WORDS).unwrap_err();
        assert!(err.to_string().contains("columns"));
        assert!(Lexicon::parse("กุ\tกู\tsometimes\tothers\n", WORDS).is_err());
        assert!(Lexicon::parse("ก ุ\tกู\tintentional\tothers\n", WORDS).is_err());
        assert!(Lexicon::parse("กู\tกู\tintentional\tothers\n", WORDS).is_err());
    }

    #[test]
    fn pattern_column_is_optional() {
        let lex = Lexicon::parse("กุ\tกู\tintentional\n", WORDS).unwrap();
        assert_eq!(lex.lookup("กุ").unwrap().pattern, None);
    }

    #[test]
    fn bundled_table_one_terms() {
        let lex = Lexicon::bundled();
        assert_eq!(lex.lookup("แม่ง").unwrap().intention, Intention::Intentional);
        assert_eq!(lex.lookup("ค่ะ").unwrap().intention, Intention::Unintentional);
        assert!(lex.lookup("กิน").is_none());
        assert!(lex.is_standard("กิน"));
    }

    #[test]
    fn load_from_files_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let lp = dir.path().join("lex.tsv");
        let wp = dir.path().join("words.txt");
        std::fs::write(&lp, BUNDLED_LEXICON).unwrap();
        std::fs::write(&wp, BUNDLED_WORDLIST).unwrap();
        let a = Lexicon::load(&lp, &wp).unwrap();
        let b = Lexicon::load(&lp, &wp).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), BUNDLED_LEXICON.lines().count());
        assert!(Lexicon::load(dir.path().join("missing"), &wp).unwrap_err().is_io());
    }
}
