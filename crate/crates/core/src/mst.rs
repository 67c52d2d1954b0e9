//! Misspelling semantic tokens: every misspelt word is followed by the tag
//! token of its detection result, so a downstream model can see where and
//! how a sentence departs from standard spelling.

use serde::Serialize;

use crate::detector::{detect, MispTag, TagCounts};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::segmenter::TokenizedSentence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentedSentence {
    pub tokens: Vec<String>,
    pub tag_counts: TagCounts,
}

impl AugmentedSentence {
    pub fn count(&self, tag: MispTag) -> usize {
        self.tag_counts.get(&tag).copied().unwrap_or(0)
    }

    pub fn total_tags(&self) -> usize {
        self.tag_counts.values().sum()
    }

    /// Counts in `MispTag::EMITTED` order.
    pub fn count_vector(&self) -> [usize; 4] {
        MispTag::EMITTED.map(|t| self.count(t))
    }

    /// The original tokens, with every tag token removed.
    pub fn strip_tags(&self) -> Vec<String> {
        self.tokens
            .iter()
            .filter(|t| MispTag::from_surface(t).is_none())
            .cloned()
            .collect()
    }
}

/// Fails if an input token is itself a tag surface form, since the output
/// would then be ambiguous.
pub fn annotate(sentence: &TokenizedSentence, lex: &Lexicon) -> Result<AugmentedSentence> {
    let mut tokens = Vec::with_capacity(sentence.len() * 2);
    let mut tag_counts = TagCounts::new();
    for (i, tok) in sentence.tokens.iter().enumerate() {
        if MispTag::from_surface(tok).is_some() {
            return Err(Error::invalid(format!(
                "token {i} is the reserved tag `{tok}`; input already annotated?"
            )));
        }
        tokens.push(tok.clone());
        let tag = detect(tok, lex);
        if let Some(surface) = tag.surface() {
            tokens.push(surface.to_string());
            *tag_counts.entry(tag).or_default() += 1;
        }
    }
    Ok(AugmentedSentence { tokens, tag_counts })
}
