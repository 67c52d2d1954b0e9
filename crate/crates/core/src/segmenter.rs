//! Dictionary longest-match word segmentation.
//!
//! Thai is written without spaces between words. The segmenter walks the
//! grapheme clusters left to right and takes the longest vocabulary item
//! (wordlist or lexicon key) starting at each position. Clusters that start
//! no vocabulary item are gathered into a single out-of-vocabulary token.
//! Whitespace always ends a token and is kept aside so the input can be
//! rebuilt exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::thai_script::{grapheme_clusters, join_clusters, Cluster};

/// Minimum number of extra copies of a matched word's last cluster that are
/// absorbed into the word (`กินนนน` stays one token).
const ELONGATION_MIN_EXTRA: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Negative,
    Neutral,
    Positive,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Sentiment {
        Self::ALL[i]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
        }
    }
}

impl FromStr for Sentiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "negative" => Ok(Sentiment::Negative),
            "neutral" => Ok(Sentiment::Neutral),
            "positive" => Ok(Sentiment::Positive),
            other => Err(Error::invalid(format!("unknown sentiment label `{other}`"))),
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Word tokens of one sentence, optionally labeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedSentence {
    pub tokens: Vec<String>,
    pub label: Option<Sentiment>,
    /// Whitespace before each token plus the trailing whitespace; empty when
    /// the sentence was built from pre-tokenized input.
    gaps: Vec<String>,
}

impl TokenizedSentence {
    /// Builds a sentence from pre-tokenized input. Tokens must be non-empty.
    pub fn from_tokens<S: Into<String>>(
        tokens: impl IntoIterator<Item = S>,
        label: Option<Sentiment>,
    ) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.iter().any(String::is_empty) {
            return Err(Error::invalid("empty token in pre-tokenized sentence"));
        }
        Ok(TokenizedSentence {
            tokens,
            label,
            gaps: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn with_label(mut self, label: Option<Sentiment>) -> Self {
        self.label = label;
        self
    }

    /// Same sentence with every token replaced by `f(token)`.
    pub fn map_tokens(&self, mut f: impl FnMut(&str) -> String) -> Self {
        TokenizedSentence {
            tokens: self.tokens.iter().map(|t| f(t)).collect(),
            label: self.label,
            gaps: self.gaps.clone(),
        }
    }

    /// Rebuilds the original text. Pre-tokenized sentences are joined without
    /// separators.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for (i, tok) in self.tokens.iter().enumerate() {
            if let Some(gap) = self.gaps.get(i) {
                out.push_str(gap);
            }
            out.push_str(tok);
        }
        if let Some(trailing) = self.gaps.get(self.tokens.len()) {
            out.push_str(trailing);
        }
        out
    }
}

/// Segments raw text against the lexicon's combined vocabulary.
pub fn segment(text: &str, lex: &Lexicon) -> TokenizedSentence {
    let clusters = grapheme_clusters(text);
    let mut tokens = Vec::new();
    let mut gaps = Vec::new();
    let mut gap = String::new();
    let mut oov = String::new();

    let flush_oov = |oov: &mut String, gap: &mut String, tokens: &mut Vec<String>, gaps: &mut Vec<String>| {
        if !oov.is_empty() {
            gaps.push(std::mem::take(gap));
            tokens.push(std::mem::take(oov));
        }
    };

    let mut i = 0;
    while i < clusters.len() {
        if clusters[i].is_whitespace() {
            flush_oov(&mut oov, &mut gap, &mut tokens, &mut gaps);
            gap.push_str(clusters[i].as_str());
            i += 1;
            continue;
        }
        match longest_match(&clusters[i..], lex) {
            Some(len) => {
                flush_oov(&mut oov, &mut gap, &mut tokens, &mut gaps);
                let extra = elongation(&clusters[i + len - 1..]);
                let end = i + len + extra;
                gaps.push(std::mem::take(&mut gap));
                tokens.push(join_clusters(&clusters[i..end]));
                i = end;
            }
            None => {
                oov.push_str(clusters[i].as_str());
                i += 1;
            }
        }
    }
    flush_oov(&mut oov, &mut gap, &mut tokens, &mut gaps);
    gaps.push(gap);

    TokenizedSentence {
        tokens,
        label: None,
        gaps,
    }
}

/// Length in clusters of the longest vocabulary item at the start of
/// `clusters`, never crossing whitespace.
fn longest_match(clusters: &[Cluster], lex: &Lexicon) -> Option<usize> {
    let limit = clusters
        .iter()
        .take(lex.max_word_clusters())
        .take_while(|c| !c.is_whitespace())
        .count();
    let mut candidate = String::new();
    let mut best = None;
    for (n, c) in clusters[..limit].iter().enumerate() {
        candidate.push_str(c.as_str());
        if lex.in_vocabulary(&candidate) {
            best = Some(n + 1);
        }
    }
    best
}

/// Count of clusters following `tail[0]` that repeat it, if long enough to
/// be an elongation rather than the start of the next word.
fn elongation(tail: &[Cluster]) -> usize {
    let last = &tail[0];
    let extra = tail[1..].iter().take_while(|c| *c == last).count();
    if extra >= ELONGATION_MIN_EXTRA {
        extra
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(words: &str) -> Lexicon {
        Lexicon::parse("", words).unwrap()
    }

    #[test]
    fn splits_compound() {
        let s = segment("น่ากิน", &lex("น่า\nกิน\n"));
        assert_eq!(s.tokens, ["น่า", "กิน"]);
    }

    #[test]
    fn whitespace_and_oov_run() {
        let s = segment("abc กิน", &lex("กิน\n"));
        assert_eq!(s.tokens, ["abc", "กิน"]);
        assert_eq!(s.text(), "abc กิน");
    }

    #[test]
    fn empty_input() {
        let s = segment("", &lex("กิน\n"));
        assert!(s.tokens.is_empty());
        assert_eq!(s.text(), "");
    }

    #[test]
    fn whole_input_is_one_word() {
        let s = segment("น่ากิน", &lex("น่า\nกิน\nน่ากิน\n"));
        assert_eq!(s.tokens, ["น่ากิน"]);
    }

    #[test]
    fn entirely_oov() {
        let s = segment("สวัสดี", &lex("กิน\n"));
        assert_eq!(s.tokens, ["สวัสดี"]);
    }

    #[test]
    fn elongated_word_stays_whole() {
        let l = lex("น่า\nกิน\nคน\nนอน\n");
        assert_eq!(segment("น่ากินนนนน", &l).tokens, ["น่า", "กินนนนน"]);
        // a single repeat is the next word, not an elongation
        assert_eq!(segment("คนนอน", &l).tokens, ["คน", "นอน"]);
    }

    #[test]
    fn misspelt_keys_are_vocabulary() {
        let l = Lexicon::bundled();
        assert_eq!(segment("กุไปกินข้าว", &l).tokens, ["กุ", "ไป", "กิน", "ข้าว"]);
        assert_eq!(segment("อร่อยมากกก 555", &l).tokens, ["อร่อย", "มากกก", "555"]);
    }

    #[test]
    fn rebuilds_spacing() {
        let l = lex("กิน\nข้าว\n");
        let text = "  กินข้าว \t กิน  ";
        assert_eq!(segment(text, &l).text(), text);
    }

    #[test]
    fn pre_tokenized_rejects_empty() {
        assert!(TokenizedSentence::from_tokens(["a", ""], None).is_err());
    }
}
