//! Thai character classes and grapheme clustering.
//!
//! Only what the rule engines need: a total classification of Unicode scalars
//! and a cluster splitter that keeps combining marks (above/below vowels, tone
//! marks, thanthakhat) on their base character. Following vowels such as `า`
//! and `ะ` are clusters of their own.

/// Orthographic role of a single scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Consonant,
    VowelLeading,
    VowelFollowing,
    VowelAbove,
    VowelBelow,
    ToneMark,
    ThanthakhatMark,
    RepetitionMark,
    Digit,
    Other,
}

impl CharClass {
    /// Marks that attach to the preceding base character.
    pub fn is_combining(self) -> bool {
        matches!(
            self,
            CharClass::VowelAbove
                | CharClass::VowelBelow
                | CharClass::ToneMark
                | CharClass::ThanthakhatMark
        )
    }

    pub fn is_vowel(self) -> bool {
        matches!(
            self,
            CharClass::VowelLeading
                | CharClass::VowelFollowing
                | CharClass::VowelAbove
                | CharClass::VowelBelow
        )
    }
}

pub const MAI_YAMOK: char = '\u{0E46}';
pub const THANTHAKHAT: char = '\u{0E4C}';
pub const MAI_TAIKHU: char = '\u{0E47}';

pub fn classify_char(ch: char) -> CharClass {
    match ch as u32 {
        0x0E01..=0x0E2E => CharClass::Consonant,
        0x0E30 | 0x0E32 | 0x0E33 | 0x0E45 => CharClass::VowelFollowing,
        0x0E31 | 0x0E34..=0x0E37 | 0x0E47 | 0x0E4D | 0x0E4E => CharClass::VowelAbove,
        0x0E38..=0x0E3A => CharClass::VowelBelow,
        0x0E40..=0x0E44 => CharClass::VowelLeading,
        0x0E46 => CharClass::RepetitionMark,
        0x0E48..=0x0E4B => CharClass::ToneMark,
        0x0E4C => CharClass::ThanthakhatMark,
        0x0E50..=0x0E59 => CharClass::Digit,
        _ if ch.is_ascii_digit() => CharClass::Digit,
        _ => CharClass::Other,
    }
}

pub fn is_tone_mark(ch: char) -> bool {
    classify_char(ch) == CharClass::ToneMark
}

/// One base character followed by the marks that attach to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cluster(String);

impl Cluster {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// First scalar of the cluster (the base, or a lone mark).
    pub fn base(&self) -> char {
        self.0.chars().next().expect("clusters are never empty")
    }

    pub fn has_tone_mark(&self) -> bool {
        self.0.chars().any(is_tone_mark)
    }

    pub fn is_whitespace(&self) -> bool {
        self.base().is_whitespace()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl std::fmt::Display for Cluster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Cluster {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits `text` into clusters. A combining mark opens a new cluster when
/// there is no base to attach to, the base is whitespace, or it is a second
/// tone mark.
pub fn grapheme_clusters(text: &str) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    let mut current = String::new();
    let mut has_tone = false;

    for ch in text.chars() {
        let class = classify_char(ch);
        let attach = class.is_combining()
            && current.chars().next().is_some_and(|b| !b.is_whitespace())
            && !(class == CharClass::ToneMark && has_tone);
        if !attach && !current.is_empty() {
            out.push(Cluster(std::mem::take(&mut current)));
            has_tone = false;
        }
        current.push(ch);
        has_tone |= class == CharClass::ToneMark;
    }
    if !current.is_empty() {
        out.push(Cluster(current));
    }
    out
}

pub fn join_clusters<C: AsRef<str>>(clusters: &[C]) -> String {
    clusters.iter().map(AsRef::as_ref).collect()
}
