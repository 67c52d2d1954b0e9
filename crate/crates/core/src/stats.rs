//! Corpus statistics: pairwise inter-annotator agreement, per-term label
//! entropy and frequency summaries.
//!
//! Annotations JSONL has one judgment per line:
//!
//! ```text
//! {"item_id": "s12:3", "annotator_id": "a1", "label": "intentional", "term": "กุ"}
//! ```
//!
//! `term` is optional and only used for the entropy table.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{read_lines, CorpusRecord};
use crate::error::{Error, Result};
use crate::lexicon::Intention;
use crate::segmenter::Sentiment;

/// Terms need strictly more than five observations for an entropy value.
pub const DEFAULT_MIN_COUNT: usize = 6;
pub const DEFAULT_TOP_K: usize = 5;

/// Cohen's kappa between two annotators over the same items.
///
/// When chance agreement is 1 (both annotators use one and the same label
/// throughout) the ratio is undefined; the result is then 1.0 if the labels
/// agree everywhere and 0.0 otherwise.
pub fn cohen_kappa<T: Ord>(a: &[T], b: &[T]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "kappa needs equal-length label lists, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::invalid("kappa needs at least one item"));
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let p_o = agree / n;

    let mut ma: BTreeMap<&T, usize> = BTreeMap::new();
    let mut mb: BTreeMap<&T, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *ma.entry(x).or_default() += 1;
        *mb.entry(y).or_default() += 1;
    }
    let p_e: f64 = ma
        .iter()
        .map(|(k, &ca)| (ca as f64 / n) * (mb.get(k).copied().unwrap_or(0) as f64 / n))
        .sum();

    if (1.0 - p_e).abs() < f64::EPSILON {
        return Ok(if agree == n { 1.0 } else { 0.0 });
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub item_id: String,
    pub annotator_id: String,
    pub label: Intention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
}

pub fn read_annotations(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let context = path.display().to_string();
    read_lines(std::io::BufReader::new(file), &context)?
        .into_iter()
        .map(|(n, line)| serde_json::from_str(&line).map_err(|e| Error::parse(context.as_str(), n, e.to_string())))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaMatrix {
    pub annotators: Vec<String>,
    /// `None` where a pair of annotators shares no item.
    pub values: Vec<Vec<Option<f64>>>,
}

impl KappaMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.annotators.iter().position(|x| x == a)?;
        let j = self.annotators.iter().position(|x| x == b)?;
        self.values[i][j]
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("annotator").chain(self.annotators.iter().map(String::as_str));
        w.write_record(header).expect("csv to memory");
        for (name, row) in self.annotators.iter().zip(&self.values) {
            let cells = row.iter().map(|v| v.map(|k| format!("{k:.6}")).unwrap_or_default());
            w.write_record(std::iter::once(name.clone()).chain(cells))
                .expect("csv to memory");
        }
        String::from_utf8(w.into_inner().expect("flush csv")).expect("utf-8 csv")
    }
}

/// Kappa for every pair of annotators over the items both labeled.
pub fn pairwise_kappa_matrix(records: &[AnnotationRecord]) -> Result<KappaMatrix> {
    let mut by_annotator: BTreeMap<&str, BTreeMap<&str, Intention>> = BTreeMap::new();
    for r in records {
        let items = by_annotator.entry(&r.annotator_id).or_default();
        if items.insert(&r.item_id, r.label).is_some() {
            return Err(Error::invalid(format!(
                "annotator `{}` labeled item `{}` more than once",
                r.annotator_id, r.item_id
            )));
        }
    }
    if by_annotator.len() < 2 {
        return Err(Error::invalid("agreement needs at least two annotators"));
    }
    let annotators: Vec<&str> = by_annotator.keys().copied().collect();
    let k = annotators.len();
    let mut values = vec![vec![None; k]; k];
    for i in 0..k {
        values[i][i] = Some(1.0);
        for j in i + 1..k {
            let a = &by_annotator[annotators[i]];
            let b = &by_annotator[annotators[j]];
            let (la, lb): (Vec<_>, Vec<_>) = a
                .iter()
                .filter_map(|(item, la)| b.get(item).map(|lb| (*la, *lb)))
                .unzip();
            if !la.is_empty() {
                let kappa = cohen_kappa(&la, &lb)?;
                values[i][j] = Some(kappa);
                values[j][i] = Some(kappa);
            }
        }
    }
    Ok(KappaMatrix {
        annotators: annotators.into_iter().map(str::to_string).collect(),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermObservations {
    pub term: String,
    pub labels: Vec<Intention>,
}

/// Binary entropy in bits of a term's intention labels, or `None` when the
/// term has fewer than `min_count` observations.
pub fn label_entropy(obs: &TermObservations, min_count: usize) -> Option<f64> {
    let n = obs.labels.len();
    if n == 0 || n < min_count {
        return None;
    }
    let i = obs.labels.iter().filter(|&&l| l == Intention::Intentional).count();
    Some(binary_entropy(i, n - i))
}

fn binary_entropy(a: usize, b: usize) -> f64 {
    let n = (a + b) as f64;
    [a, b]
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Groups labels by term, terms in lexical order.
pub fn group_by_term<'a>(pairs: impl IntoIterator<Item = (&'a str, Intention)>) -> Vec<TermObservations> {
    let mut map: BTreeMap<&str, Vec<Intention>> = BTreeMap::new();
    for (term, label) in pairs {
        map.entry(term).or_default().push(label);
    }
    map.into_iter()
        .map(|(term, labels)| TermObservations {
            term: term.to_string(),
            labels,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRow {
    pub term: String,
    pub count: usize,
    pub intentional: usize,
    pub unintentional: usize,
    pub entropy: f64,
}

/// Entropy of every term with at least `min_count` observations.
pub fn entropy_table(observations: &[TermObservations], min_count: usize) -> Vec<EntropyRow> {
    observations
        .iter()
        .filter_map(|o| {
            let entropy = label_entropy(o, min_count)?;
            let intentional = o.labels.iter().filter(|&&l| l == Intention::Intentional).count();
            Some(EntropyRow {
                term: o.term.clone(),
                count: o.labels.len(),
                intentional,
                unintentional: o.labels.len() - intentional,
                entropy,
            })
        })
        .collect()
}

pub fn entropy_csv(rows: &[EntropyRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("csv to memory");
    }
    String::from_utf8(w.into_inner().expect("flush csv")).expect("utf-8 csv")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermCount {
    pub term: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub sentences: usize,
    pub misspelling_occurrences: usize,
    pub unique_types: usize,
    pub sentences_with_misspelling: usize,
    pub misspelt_sentence_percentage: f64,
    /// Sentence count per sentiment label, plus `unlabeled` when present.
    pub class_distribution: BTreeMap<String, usize>,
    pub top_intentional: Vec<TermCount>,
    pub top_unintentional: Vec<TermCount>,
    /// Every misspelt term, most frequent first.
    pub term_frequencies: Vec<TermCount>,
}

fn ranked(counts: BTreeMap<&str, usize>) -> Vec<TermCount> {
    let mut v: Vec<TermCount> = counts
        .into_iter()
        .map(|(t, c)| TermCount {
            term: t.to_string(),
            count: c,
        })
        .collect();
    v.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.term.cmp(&b.term)));
    v
}

/// Surface forms of every annotated span with their intention. Malformed
/// spans are reported with the record's line number.
pub fn span_terms(records: &[(usize, CorpusRecord)], context: &str) -> Result<Vec<(String, Intention)>> {
    let mut out = Vec::new();
    for (line, r) in records {
        out.extend(
            r.misspelt_terms()
                .map_err(|msg| Error::parse(context, *line, msg))?,
        );
    }
    Ok(out)
}

/// Counts over an annotated corpus. Top lists are ordered by count, then
/// by term, and hold at most `top_k` entries.
pub fn corpus_summary(records: &[(usize, CorpusRecord)], top_k: usize, context: &str) -> Result<Summary> {
    let mut class_distribution: BTreeMap<String, usize> =
        Sentiment::ALL.iter().map(|s| (s.as_str().to_string(), 0)).collect();
    let mut occurrences = 0;
    let mut with_misp = 0;
    let mut per_sentence = Vec::with_capacity(records.len());
    for (line, r) in records {
        let key = r.label.map_or("unlabeled", Sentiment::as_str);
        *class_distribution.entry(key.to_string()).or_default() += 1;
        let terms = r.misspelt_terms().map_err(|msg| Error::parse(context, *line, msg))?;
        occurrences += terms.len();
        if !terms.is_empty() {
            with_misp += 1;
        }
        per_sentence.push(terms);
    }

    let mut all: BTreeMap<&str, usize> = BTreeMap::new();
    let mut intentional: BTreeMap<&str, usize> = BTreeMap::new();
    let mut unintentional: BTreeMap<&str, usize> = BTreeMap::new();
    for (term, label) in per_sentence.iter().flatten() {
        *all.entry(term).or_default() += 1;
        let bucket = match label {
            Intention::Intentional => &mut intentional,
            Intention::Unintentional => &mut unintentional,
        };
        *bucket.entry(term).or_default() += 1;
    }
    let unique: BTreeSet<&str> = all.keys().copied().collect();

    let sentences = records.len();
    let mut top_intentional = ranked(intentional);
    top_intentional.truncate(top_k);
    let mut top_unintentional = ranked(unintentional);
    top_unintentional.truncate(top_k);
    Ok(Summary {
        sentences,
        misspelling_occurrences: occurrences,
        unique_types: unique.len(),
        sentences_with_misspelling: with_misp,
        misspelt_sentence_percentage: if sentences == 0 {
            0.0
        } else {
            100.0 * with_misp as f64 / sentences as f64
        },
        class_distribution,
        top_intentional,
        top_unintentional,
        term_frequencies: ranked(all),
    })
}
