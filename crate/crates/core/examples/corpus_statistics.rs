//! Agreement, label entropy and corpus counts over a small in-memory corpus.

use thaimisp::corpus::CorpusRecord;
use thaimisp::stats::{
    corpus_summary, entropy_table, group_by_term, pairwise_kappa_matrix, span_terms, AnnotationRecord,
    DEFAULT_MIN_COUNT,
};
use thaimisp::Intention;

const CORPUS: &str = r#"{"text":"กุไปกินข้าว","label":"positive","misspellings":[{"start":0,"end":2,"intention":"intentional"}]}
{"text":"ร้านนี้ค่ะ","label":"neutral","misspellings":[{"start":7,"end":10,"intention":"unintentional"}]}
{"text":"แย่มาก","label":"negative"}
{"text":"กุชอบ","label":"positive","misspellings":[{"start":0,"end":2,"intention":"intentional"}]}"#;

fn main() -> Result<(), thaimisp::Error> {
    let records: Vec<(usize, CorpusRecord)> = CORPUS
        .lines()
        .enumerate()
        .map(|(i, l)| Ok((i + 1, CorpusRecord::from_line(l, i + 1, "corpus")?)))
        .collect::<Result<_, thaimisp::Error>>()?;
    let summary = corpus_summary(&records, 3, "corpus")?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));

    let labels = ["intentional", "intentional", "unintentional", "intentional", "unintentional", "unintentional"];
    let flips = [false, false, false, true, false, false];
    let mut annotations = Vec::new();
    for (i, (label, flip)) in labels.iter().zip(flips).enumerate() {
        for who in ["a", "b", "c"] {
            let mut l: Intention = label.parse()?;
            if flip && who == "c" {
                l = match l {
                    Intention::Intentional => Intention::Unintentional,
                    Intention::Unintentional => Intention::Intentional,
                };
            }
            annotations.push(AnnotationRecord {
                item_id: i.to_string(),
                annotator_id: who.to_string(),
                label: l,
                term: Some("กุ".to_string()),
            });
        }
    }
    print!("{}", pairwise_kappa_matrix(&annotations)?.to_csv());

    let mut terms = span_terms(&records, "corpus")?;
    terms.extend(annotations.iter().map(|a| (a.term.clone().unwrap_or_default(), a.label)));
    let observations = group_by_term(terms.iter().map(|(t, l)| (t.as_str(), *l)));
    for row in entropy_table(&observations, DEFAULT_MIN_COUNT) {
        println!("{} n={} H={:.3}", row.term, row.count, row.entropy);
    }
    Ok(())
}
