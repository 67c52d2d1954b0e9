//! Corpus JSONL records.
//!
//! One JSON object per line:
//!
//! ```text
//! {"text": "...", "label": "positive", "tokens": ["..."], "misspellings": [...]}
//! ```
//!
//! `label`, `tokens` and `misspellings` are optional. When `tokens` is
//! present segmentation is skipped. `misspellings` holds annotation spans
//! used by corpus statistics: `{"start", "end", "intention", "corrected"?}`
//! with `start`/`end` counted in Unicode scalars of `text`, end exclusive.
//! Unknown fields are preserved by the pipeline stages that rewrite records.

use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lexicon::{Intention, Lexicon};
use crate::segmenter::{segment, Sentiment, TokenizedSentence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisspellingSpan {
    pub start: usize,
    pub end: usize,
    pub intention: Intention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    #[serde(default)]
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Sentiment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tokens: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub misspellings: Option<Vec<MisspellingSpan>>,
}

impl CorpusRecord {
    pub fn from_line(line: &str, line_no: usize, context: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::parse(context, line_no, e.to_string()))
    }

    /// Pre-tokenized form if present, otherwise the segmented text.
    pub fn sentence(&self, lex: &Lexicon) -> Result<TokenizedSentence> {
        match &self.tokens {
            Some(tokens) => TokenizedSentence::from_tokens(tokens.iter().cloned(), self.label),
            None => Ok(segment(&self.text, lex).with_label(self.label)),
        }
    }

    /// Surface forms of the annotated spans, validated against `text`.
    pub fn misspelt_terms(&self) -> std::result::Result<Vec<(String, Intention)>, String> {
        let Some(spans) = &self.misspellings else {
            return Ok(Vec::new());
        };
        let chars: Vec<char> = self.text.chars().collect();
        let mut out = Vec::with_capacity(spans.len());
        for span in spans {
            if span.start >= span.end {
                return Err(format!("span {}..{} is empty or reversed", span.start, span.end));
            }
            if span.end > chars.len() {
                return Err(format!(
                    "span {}..{} exceeds text length {}",
                    span.start,
                    span.end,
                    chars.len()
                ));
            }
            let term: String = chars[span.start..span.end].iter().collect();
            if term.trim().is_empty() {
                return Err(format!("span {}..{} covers only whitespace", span.start, span.end));
            }
            out.push((term, span.intention));
        }
        Ok(out)
    }
}

/// Non-empty lines of a JSONL stream with their 1-based line numbers.
pub fn read_lines(reader: impl BufRead, context: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(context, e))?;
        if !line.trim().is_empty() {
            out.push((idx + 1, line));
        }
    }
    Ok(out)
}

pub fn read_records(path: &Path) -> Result<Vec<(usize, CorpusRecord)>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let context = path.display().to_string();
    read_lines(std::io::BufReader::new(file), &context)?
        .into_iter()
        .map(|(n, line)| CorpusRecord::from_line(&line, n, &context).map(|r| (n, r)))
        .collect()
}

/// Loads a corpus file and tokenizes every record.
pub fn read_sentences(path: &Path, lex: &Lexicon) -> Result<Vec<TokenizedSentence>> {
    let context = path.display().to_string();
    read_records(path)?
        .into_iter()
        .map(|(n, r)| {
            r.sentence(lex)
                .map_err(|e| Error::parse(context.as_str(), n, e.to_string()))
        })
        .collect()
}

/// Parses a line into a JSON object, keeping every field.
pub fn parse_object(line: &str, line_no: usize, context: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(line) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::parse(context, line_no, "expected a JSON object")),
        Err(e) => Err(Error::parse(context, line_no, e.to_string())),
    }
}
