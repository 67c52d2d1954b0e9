//! Misspelling detection and correction.
//!
//! Detection maps a token to one of four tags, checked in a fixed order:
//!
//! 1. `<lol>`: a run of at least three `5` (Thai laughter, "hahaha").
//! 2. `<rep>`: any other cluster repeated at least three times, or `ๆ`
//!    repeated at least twice.
//! 3. `<int>`: the token is an intentional misspelling in the lexicon.
//! 4. `<msp>`: the token is an unintentional misspelling in the lexicon.
//!
//! Anything else is `Null`. Correction is a dictionary lookup, falling back
//! to collapsing an expressive run when that yields a known word.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{Intention, Lexicon};
use crate::thai_script::{grapheme_clusters, Cluster, MAI_YAMOK};

pub const LAUGH_RUN_MIN: usize = 3;
pub const REPEAT_RUN_MIN: usize = 3;
pub const MAI_YAMOK_RUN_MIN: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MispTag {
    #[serde(rename = "LOL")]
    Lol,
    #[serde(rename = "REP")]
    Rep,
    #[serde(rename = "INT")]
    Int,
    #[serde(rename = "MSP")]
    Msp,
    #[serde(rename = "NULL")]
    Null,
}

impl MispTag {
    /// The four tags that have a token realization, in feature order.
    pub const EMITTED: [MispTag; 4] = [MispTag::Lol, MispTag::Rep, MispTag::Int, MispTag::Msp];

    pub fn surface(self) -> Option<&'static str> {
        match self {
            MispTag::Lol => Some("<lol>"),
            MispTag::Rep => Some("<rep>"),
            MispTag::Int => Some("<int>"),
            MispTag::Msp => Some("<msp>"),
            MispTag::Null => None,
        }
    }

    pub fn from_surface(token: &str) -> Option<MispTag> {
        Self::EMITTED.into_iter().find(|t| t.surface() == Some(token))
    }

    pub fn name(self) -> &'static str {
        match self {
            MispTag::Lol => "LOL",
            MispTag::Rep => "REP",
            MispTag::Int => "INT",
            MispTag::Msp => "MSP",
            MispTag::Null => "NULL",
        }
    }

    /// Lower-case key used in JSON count objects.
    pub fn key(self) -> &'static str {
        match self {
            MispTag::Lol => "lol",
            MispTag::Rep => "rep",
            MispTag::Int => "int",
            MispTag::Msp => "msp",
            MispTag::Null => "null",
        }
    }

    pub fn is_null(self) -> bool {
        self == MispTag::Null
    }
}

impl fmt::Display for MispTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MispTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [MispTag::Lol, MispTag::Rep, MispTag::Int, MispTag::Msp, MispTag::Null]
            .into_iter()
            .find(|t| t.name() == s || t.surface() == Some(s))
            .ok_or_else(|| Error::invalid(format!("unknown tag `{s}`")))
    }
}

/// Counts per emitted tag; `Null` is never counted.
pub type TagCounts = BTreeMap<MispTag, usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunAnalysis {
    /// Token with every run of identical clusters reduced to one.
    pub collapsed: String,
    pub max_run_char: Cluster,
    pub max_run_len: usize,
    /// Every maximal run as (cluster, length), in order.
    pub runs: Vec<(Cluster, usize)>,
}

impl RunAnalysis {
    fn longest_run_of(&self, pred: impl Fn(&Cluster) -> bool) -> usize {
        self.runs
            .iter()
            .filter(|(c, _)| pred(c))
            .map(|(_, n)| *n)
            .max()
            .unwrap_or(0)
    }

    pub fn laugh_run(&self) -> usize {
        self.longest_run_of(|c| c.as_str() == "5")
    }

    pub fn has_laugh(&self) -> bool {
        self.laugh_run() >= LAUGH_RUN_MIN
    }

    pub fn has_repetition(&self) -> bool {
        self.runs.iter().any(|(c, n)| {
            if c.as_str() == "5" {
                false
            } else if c.base() == MAI_YAMOK {
                *n >= MAI_YAMOK_RUN_MIN
            } else {
                *n >= REPEAT_RUN_MIN
            }
        })
    }

    /// True when the token carries a run that detection would tag.
    pub fn is_expressive(&self) -> bool {
        self.has_laugh() || self.has_repetition()
    }
}

pub fn collapse_runs(token: &str) -> Result<RunAnalysis> {
    let clusters = grapheme_clusters(token);
    if clusters.is_empty() {
        return Err(Error::invalid("cannot analyse runs of an empty token"));
    }
    let mut runs: Vec<(Cluster, usize)> = Vec::new();
    for c in clusters {
        match runs.last_mut() {
            Some((prev, n)) if *prev == c => *n += 1,
            _ => runs.push((c, 1)),
        }
    }
    let (max_run_char, max_run_len) = runs
        .iter()
        .fold(None::<(&Cluster, usize)>, |best, (c, n)| match best {
            Some((_, m)) if m >= *n => best,
            _ => Some((c, *n)),
        })
        .map(|(c, n)| (c.clone(), n))
        .expect("at least one run");
    let collapsed = runs.iter().map(|(c, _)| c.as_str()).collect();
    Ok(RunAnalysis {
        collapsed,
        max_run_char,
        max_run_len,
        runs,
    })
}

pub fn detect(token: &str, lex: &Lexicon) -> MispTag {
    if let Ok(runs) = collapse_runs(token) {
        if runs.has_laugh() {
            return MispTag::Lol;
        }
        if runs.has_repetition() {
            return MispTag::Rep;
        }
    }
    match lex.lookup(token).map(|e| e.intention) {
        Some(Intention::Intentional) => MispTag::Int,
        Some(Intention::Unintentional) => MispTag::Msp,
        None => MispTag::Null,
    }
}

/// Standard form of `token`.
///
/// A lexicon hit returns its correction. Otherwise, if the token carries an
/// expressive run and collapsing it yields a vocabulary item, that item is
/// corrected in turn. Standard words and everything else pass unchanged.
pub fn correct(token: &str, lex: &Lexicon) -> String {
    if let Some(entry) = lex.lookup(token) {
        return entry.corrected.clone();
    }
    if lex.is_standard(token) {
        return token.to_string();
    }
    match collapse_runs(token) {
        Ok(runs) if runs.is_expressive() && runs.collapsed != token => {
            if lex.in_vocabulary(&runs.collapsed) {
                correct(&runs.collapsed, lex)
            } else {
                token.to_string()
            }
        }
        _ => token.to_string(),
    }
}
