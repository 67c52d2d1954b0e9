//! Rule-based classification of a (misspelt, corrected) pair into the ten
//! misspelling patterns.
//!
//! Rules are tried in a fixed order and the first that fires wins:
//!
//! | # | rule | label |
//! |---|------|-------|
//! | 1 | collapsing runs (or removing duplicated clusters / `ๆ`) gives the correction | character repetition |
//! | 2 | tone marks differ, the rest is equal up to vowel length | tone modification / tone confusion |
//! | 3 | tone marks equal, only vowels differ (incl. inherent-consonant spellings) | vowel substitution |
//! | 4 | only consonants (or thanthakhat) differ | consonant deviation / consonant confusion |
//! | 5 | intentional, shorter, consonant skeleton kept in order | simplifying |
//! | 6 | intentional, at most half the clusters, cluster bases kept in order | ad hoc abbreviation |
//! | 7 | unintentional | typo |
//! | 8 | anything else | others |
//!
//! Rules 2 and 4 split on the intention label, which is an input: it comes
//! from human judgment and is not inferred here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detector::collapse_runs;
use crate::error::{Error, Result};
use crate::lexicon::Intention;
use crate::thai_script::{classify_char, grapheme_clusters, is_tone_mark, CharClass, Cluster, MAI_YAMOK};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternLabel {
    CharacterRepetition,
    VowelSubstitution,
    ToneModification,
    ConsonantDeviation,
    Simplifying,
    AdHocAbbreviation,
    ToneConfusion,
    ConsonantConfusion,
    Typo,
    Others,
}

impl PatternLabel {
    pub const ALL: [PatternLabel; 10] = [
        PatternLabel::CharacterRepetition,
        PatternLabel::VowelSubstitution,
        PatternLabel::ToneModification,
        PatternLabel::ConsonantDeviation,
        PatternLabel::Simplifying,
        PatternLabel::AdHocAbbreviation,
        PatternLabel::ToneConfusion,
        PatternLabel::ConsonantConfusion,
        PatternLabel::Typo,
        PatternLabel::Others,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PatternLabel::CharacterRepetition => "character_repetition",
            PatternLabel::VowelSubstitution => "vowel_substitution",
            PatternLabel::ToneModification => "tone_modification",
            PatternLabel::ConsonantDeviation => "consonant_deviation",
            PatternLabel::Simplifying => "simplifying",
            PatternLabel::AdHocAbbreviation => "ad_hoc_abbreviation",
            PatternLabel::ToneConfusion => "tone_confusion",
            PatternLabel::ConsonantConfusion => "consonant_confusion",
            PatternLabel::Typo => "typo",
            PatternLabel::Others => "others",
        }
    }
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PatternLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown pattern `{s}`")))
    }
}

/// One step of an alignment from the corrected form to the misspelt form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditOp<T> {
    Keep(T),
    /// `from` in the corrected form became `to` in the misspelt form.
    Substitute { from: T, to: T },
    /// Present only in the misspelt form.
    Insert(T),
    /// Present only in the corrected form.
    Delete(T),
}

/// Minimal unit-cost alignment of `corrected` onto `misspelt`. On equal
/// cost the backtrace prefers a diagonal step (keep or substitute), then a
/// deletion, then an insertion.
#[allow(clippy::needless_range_loop)]
pub fn align<T: Eq + Clone>(misspelt: &[T], corrected: &[T]) -> Vec<EditOp<T>> {
    let (n, m) = (corrected.len(), misspelt.len());
    let mut cost = vec![vec![0usize; m + 1]; n + 1];
    for (i, row) in cost.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=m {
        cost[0][j] = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let diag = cost[i - 1][j - 1] + usize::from(corrected[i - 1] != misspelt[j - 1]);
            cost[i][j] = diag.min(cost[i - 1][j] + 1).min(cost[i][j - 1] + 1);
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let same = corrected[i - 1] == misspelt[j - 1];
            if cost[i][j] == cost[i - 1][j - 1] + usize::from(!same) {
                ops.push(if same {
                    EditOp::Keep(corrected[i - 1].clone())
                } else {
                    EditOp::Substitute {
                        from: corrected[i - 1].clone(),
                        to: misspelt[j - 1].clone(),
                    }
                });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && cost[i][j] == cost[i - 1][j] + 1 {
            ops.push(EditOp::Delete(corrected[i - 1].clone()));
            i -= 1;
        } else {
            ops.push(EditOp::Insert(misspelt[j - 1].clone()));
            j -= 1;
        }
    }
    ops.reverse();
    ops
}

/// Cluster-level edit script taking the corrected form to the misspelt one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterDiff {
    pub ops: Vec<EditOp<Cluster>>,
}

impl ClusterDiff {
    pub fn substitutions(&self) -> Vec<(Cluster, Cluster)> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                EditOp::Substitute { from, to } => Some((from.clone(), to.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn insertions(&self) -> Vec<Cluster> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                EditOp::Insert(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn deletions(&self) -> Vec<Cluster> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                EditOp::Delete(c) => Some(c.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.iter().all(|op| matches!(op, EditOp::Keep(_)))
    }

    /// Replays the script over `corrected`, yielding the misspelt form.
    /// Returns `None` if `corrected` does not match the script's source side.
    pub fn apply(&self, corrected: &str) -> Option<String> {
        let source = grapheme_clusters(corrected);
        let mut it = source.iter();
        let mut out = String::new();
        for op in &self.ops {
            match op {
                EditOp::Keep(c) => {
                    if it.next()? != c {
                        return None;
                    }
                    out.push_str(c.as_str());
                }
                EditOp::Substitute { from, to } => {
                    if it.next()? != from {
                        return None;
                    }
                    out.push_str(to.as_str());
                }
                EditOp::Insert(c) => out.push_str(c.as_str()),
                EditOp::Delete(c) => {
                    if it.next()? != c {
                        return None;
                    }
                }
            }
        }
        if it.next().is_some() {
            return None;
        }
        Some(out)
    }
}

pub fn cluster_diff(misspelt: &str, corrected: &str) -> ClusterDiff {
    let m = grapheme_clusters(misspelt);
    let c = grapheme_clusters(corrected);
    ClusterDiff { ops: align(&m, &c) }
}

/// Evaluation steps of the rule engine, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Repetition,
    Tone,
    Vowel,
    Consonant,
    Simplifying,
    AdHocAbbreviation,
    Typo,
    Fallback,
}

pub const RULE_ORDER: [Rule; 8] = [
    Rule::Repetition,
    Rule::Tone,
    Rule::Vowel,
    Rule::Consonant,
    Rule::Simplifying,
    Rule::AdHocAbbreviation,
    Rule::Typo,
    Rule::Fallback,
];

/// Outcome of one rule during a traced classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleStep {
    pub rule: Rule,
    pub fired: Option<PatternLabel>,
}

struct Pair<'a> {
    misspelt: &'a str,
    corrected: &'a str,
    intention: Intention,
}

impl Rule {
    fn evaluate(self, p: &Pair<'_>) -> Option<PatternLabel> {
        let intentional = p.intention == Intention::Intentional;
        let fired = match self {
            Rule::Repetition => is_repetition(p.misspelt, p.corrected),
            Rule::Tone => is_tone_change(p.misspelt, p.corrected),
            Rule::Vowel => is_vowel_change(p.misspelt, p.corrected),
            Rule::Consonant => {
                is_consonant_change(p.misspelt, p.corrected)
                    && !(intentional && is_homophone_simplification(p.misspelt, p.corrected))
            }
            Rule::Simplifying => intentional && is_simplification(p.misspelt, p.corrected),
            Rule::AdHocAbbreviation => intentional && is_abbreviation(p.misspelt, p.corrected),
            Rule::Typo => !intentional,
            Rule::Fallback => true,
        };
        if !fired {
            return None;
        }
        Some(match (self, p.intention) {
            (Rule::Repetition, _) => PatternLabel::CharacterRepetition,
            (Rule::Tone, Intention::Intentional) => PatternLabel::ToneModification,
            (Rule::Tone, Intention::Unintentional) => PatternLabel::ToneConfusion,
            (Rule::Vowel, _) => PatternLabel::VowelSubstitution,
            (Rule::Consonant, Intention::Intentional) => PatternLabel::ConsonantDeviation,
            (Rule::Consonant, Intention::Unintentional) => PatternLabel::ConsonantConfusion,
            (Rule::Simplifying, _) => PatternLabel::Simplifying,
            (Rule::AdHocAbbreviation, _) => PatternLabel::AdHocAbbreviation,
            (Rule::Typo, _) => PatternLabel::Typo,
            (Rule::Fallback, _) => PatternLabel::Others,
        })
    }
}

pub fn classify_pattern(misspelt: &str, corrected: &str, intention: Intention) -> Result<PatternLabel> {
    classify_with_order(misspelt, corrected, intention, &RULE_ORDER).map(|(label, _)| label)
}

/// Like [`classify_pattern`], also returning every rule evaluated up to the
/// one that fired.
pub fn classify_pattern_traced(
    misspelt: &str,
    corrected: &str,
    intention: Intention,
) -> Result<(PatternLabel, Vec<RuleStep>)> {
    classify_with_order(misspelt, corrected, intention, &RULE_ORDER)
}

/// Runs the rules in the given order. `Fallback` is implied at the end.
pub fn classify_with_order(
    misspelt: &str,
    corrected: &str,
    intention: Intention,
    order: &[Rule],
) -> Result<(PatternLabel, Vec<RuleStep>)> {
    if misspelt == corrected {
        return Err(Error::invalid(format!(
            "`{misspelt}` equals its correction; not a misspelling"
        )));
    }
    if misspelt.is_empty() || corrected.is_empty() {
        return Err(Error::invalid("pattern classification needs two non-empty forms"));
    }
    let pair = Pair {
        misspelt,
        corrected,
        intention,
    };
    let mut trace = Vec::new();
    for &rule in order.iter().chain(std::iter::once(&Rule::Fallback)) {
        let fired = rule.evaluate(&pair);
        trace.push(RuleStep { rule, fired });
        if let Some(label) = fired {
            return Ok((label, trace));
        }
    }
    unreachable!("fallback always fires")
}

// ---------------------------------------------------------------------------
// rule predicates

fn chars(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn class_of(ch: char) -> CharClass {
    classify_char(ch)
}

fn is_consonantal(ch: char) -> bool {
    matches!(class_of(ch), CharClass::Consonant | CharClass::ThanthakhatMark)
}

fn is_repetition(misspelt: &str, corrected: &str) -> bool {
    if let Ok(runs) = collapse_runs(misspelt) {
        if runs.collapsed == corrected {
            return true;
        }
    }
    // otherwise every extra cluster must extend a run or be a repetition mark
    let m = grapheme_clusters(misspelt);
    let diff = align(&m, &grapheme_clusters(corrected));
    let mut pos = 0;
    let mut inserted_any = false;
    for op in &diff {
        match op {
            EditOp::Keep(_) => pos += 1,
            EditOp::Insert(c) => {
                let dup = (pos > 0 && m[pos - 1] == *c) || m.get(pos + 1) == Some(c);
                if !(dup || c.base() == MAI_YAMOK) {
                    return false;
                }
                inserted_any = true;
                pos += 1;
            }
            EditOp::Substitute { .. } | EditOp::Delete(_) => return false,
        }
    }
    inserted_any
}

fn tone_marks(s: &str) -> Vec<char> {
    s.chars().filter(|&c| is_tone_mark(c)).collect()
}

fn strip_tones(s: &str) -> String {
    s.chars().filter(|&c| !is_tone_mark(c)).collect()
}

/// Maps every short vowel spelling onto its long counterpart:
/// อะ/อั→อา, อิ→อี, อึ→อื, อุ→อู, เอะ/เอ็→เอ, แอะ/แอ็→แอ, โอะ→โอ, เอาะ→ออ,
/// เออะ→เออ. Other characters pass through.
pub fn vowel_length_neutral(s: &str) -> String {
    let cs = chars(s);
    let mut out = String::with_capacity(s.len());
    let mut front: Option<char> = None;
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        // เCาะ -> Cอ (C is one consonant, optionally followed by ร ล ว)
        if ch == 'เ' {
            let mut k = i + 1;
            while k < cs.len() && k <= i + 2 && class_of(cs[k]) == CharClass::Consonant {
                k += 1;
            }
            if k > i + 1 && cs.get(k) == Some(&'า') && cs.get(k + 1) == Some(&'ะ') {
                out.extend(&cs[i + 1..k]);
                out.push('อ');
                i = k + 2;
                front = None;
                continue;
            }
        }
        match ch {
            'เ' | 'แ' | 'โ' => {
                front = Some(ch);
                out.push(ch);
            }
            'ะ' => {
                if front.take().is_none() {
                    out.push('า');
                }
            }
            'ั' => out.push('า'),
            '็' => {}
            'ิ' => out.push('ี'),
            'ึ' => out.push('ื'),
            'ุ' => out.push('ู'),
            c if class_of(c) == CharClass::Consonant => out.push(c),
            c => {
                if class_of(c) == CharClass::VowelFollowing || c.is_whitespace() {
                    front = None;
                }
                out.push(c);
            }
        }
        i += 1;
    }
    out
}

/// Rewrites vowels with an inherent final consonant into their explicit
/// form: อำ→อัม, อรรม→อัม, ไอ/ใอ→อัย.
pub fn inherent_consonant_neutral(s: &str) -> String {
    let cs = chars(s);
    let mut out: Vec<char> = Vec::with_capacity(cs.len() + 2);
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        match ch {
            'ไ' | 'ใ' if cs.get(i + 1).is_some_and(|&c| class_of(c) == CharClass::Consonant) => {
                out.push(cs[i + 1]);
                // keep marks attached to the consonant
                let mut k = i + 2;
                while k < cs.len() && class_of(cs[k]).is_combining() {
                    out.push(cs[k]);
                    k += 1;
                }
                out.push('ั');
                out.push('ย');
                i = k;
                continue;
            }
            'ำ' => {
                out.push('ั');
                out.push('ม');
            }
            'ร' if i > 0
                && class_of(cs[i - 1]) == CharClass::Consonant
                && cs.get(i + 1) == Some(&'ร')
                && cs.get(i + 2) == Some(&'ม') =>
            {
                out.push('ั');
                out.push('ม');
                i += 3;
                continue;
            }
            c => out.push(c),
        }
        i += 1;
    }
    out.into_iter().collect()
}

fn is_tone_change(misspelt: &str, corrected: &str) -> bool {
    if tone_marks(misspelt) == tone_marks(corrected) {
        return false;
    }
    let (a, b) = (strip_tones(misspelt), strip_tones(corrected));
    a == b || vowel_length_neutral(&a) == vowel_length_neutral(&b)
}

/// Scalars with vowels removed.
fn without_vowels(s: &str) -> Vec<char> {
    s.chars().filter(|&c| !class_of(c).is_vowel()).collect()
}

fn is_vowel_change(misspelt: &str, corrected: &str) -> bool {
    if tone_marks(misspelt) != tone_marks(corrected) {
        return false;
    }
    if without_vowels(misspelt) == without_vowels(corrected) {
        return true;
    }
    let canon = |s: &str| vowel_length_neutral(&inherent_consonant_neutral(s));
    canon(misspelt) == canon(corrected)
}

fn is_consonant_change(misspelt: &str, corrected: &str) -> bool {
    // every non-consonant scalar is kept in order, so some alignment edits
    // consonants only
    let rest = |s: &str| -> Vec<char> { s.chars().filter(|&c| !is_consonantal(c)).collect() };
    rest(misspelt) == rest(corrected)
}

/// Letters that spell the same initial sound; the first of each group is
/// the common spelling.
const HOMOPHONE_GROUPS: &[&str] = &[
    "สซศษ", "นณ", "ตฏ", "ทถฐฑฒธ", "ดฎ", "พผภ", "ฟฝ", "คขฃฅฆ", "ชฉฌ", "ยญ", "ลฬ", "หฮ",
];

fn homophone_canonical(ch: char) -> char {
    HOMOPHONE_GROUPS
        .iter()
        .find(|g| g.contains(ch))
        .and_then(|g| g.chars().next())
        .unwrap_or(ch)
}

fn consonant_skeleton(s: &str, canonical: bool) -> Vec<char> {
    s.chars()
        .filter(|&c| class_of(c) == CharClass::Consonant)
        .map(|c| if canonical { homophone_canonical(c) } else { c })
        .collect()
}

fn is_subsequence<T: PartialEq>(needle: &[T], hay: &[T]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

fn is_abbreviation(misspelt: &str, corrected: &str) -> bool {
    let m = grapheme_clusters(misspelt);
    let c = grapheme_clusters(corrected);
    if m.len() * 2 > c.len() {
        return false;
    }
    let mb: Vec<char> = m.iter().map(Cluster::base).collect();
    let cb: Vec<char> = c.iter().map(Cluster::base).collect();
    is_subsequence(&mb, &cb)
}

fn is_simplification(misspelt: &str, corrected: &str) -> bool {
    let skeleton = consonant_skeleton(misspelt, true);
    !skeleton.is_empty()
        && misspelt.chars().count() < corrected.chars().count()
        && !is_abbreviation(misspelt, corrected)
        && is_subsequence(&skeleton, &consonant_skeleton(corrected, true))
}

/// A shortening that only works once rare letters are read as their common
/// homophones (ษ→ส, ณ→น, ...).
fn is_homophone_simplification(misspelt: &str, corrected: &str) -> bool {
    is_simplification(misspelt, corrected)
        && !is_subsequence(
            &consonant_skeleton(misspelt, false),
            &consonant_skeleton(corrected, false),
        )
}
