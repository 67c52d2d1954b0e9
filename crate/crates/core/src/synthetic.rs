//! Deterministic synthetic corpus where part of the sentiment signal sits in
//! which spelling of a word is used.
//!
//! Half of the sentences carry a class word. The other half carry only a
//! shared base word, written as an intentional variant (positive), an
//! unintentional variant (negative) or in standard spelling (neutral). A
//! variant's vector is its base vector plus a style direction and noise, so
//! the vectors hint at the spelling and the tag tokens state it outright.
//! Test sentences use base words never seen in training.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{evaluate, train, EvalReport, FeatureMode, Subset, TrainConfig};
use crate::error::Result;
use crate::lexicon::Lexicon;
use crate::mae::EmbeddingStore;
use crate::segmenter::{Sentiment, TokenizedSentence};
use crate::thai_script::grapheme_clusters;

const ONSETS: &[char] = &[
    'ก', 'ข', 'ค', 'ง', 'จ', 'ช', 'ซ', 'ด', 'ต', 'ท', 'น', 'บ', 'ป', 'พ', 'ฟ', 'ม', 'ย', 'ร', 'ล', 'ว', 'ส', 'ห', 'อ',
];
const SYLLABLES: &[&str] = &["{}า", "{}ี", "{}ู", "เ{}", "แ{}", "โ{}", "{}ิน", "{}าง", "{}ม"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub sentences: usize,
    pub dim: usize,
    pub class_words: usize,
    pub fillers: usize,
    /// Base words per split.
    pub base_words: usize,
    /// Length of the direction shared by each class's words.
    pub class_strength: f64,
    /// Length of the style direction added to variant vectors.
    pub style_strength: f64,
    /// Half-width of the uniform noise added to variant vectors.
    pub noise: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: 13,
            sentences: 600,
            dim: 16,
            class_words: 8,
            fillers: 40,
            base_words: 12,
            class_strength: 1.0,
            style_strength: 2.5,
            noise: 0.75,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub lexicon: Lexicon,
    pub store: EmbeddingStore,
    pub train: Vec<TokenizedSentence>,
    pub test: Vec<TokenizedSentence>,
    /// Lexicon TSV the lexicon was built from.
    pub lexicon_tsv: String,
    pub wordlist: String,
}

struct Vocab {
    rng: ChaCha8Rng,
    used: std::collections::HashSet<String>,
}

impl Vocab {
    /// A fresh two-syllable word with no repeated adjacent clusters.
    fn word(&mut self) -> String {
        loop {
            let w: String = (0..2)
                .map(|_| {
                    let c = ONSETS.choose(&mut self.rng).expect("onsets");
                    SYLLABLES
                        .choose(&mut self.rng)
                        .expect("syllables")
                        .replace("{}", &c.to_string())
                })
                .collect();
            let cl = grapheme_clusters(&w);
            if cl.windows(2).any(|p| p[0] == p[1]) {
                continue;
            }
            if self.used.insert(w.clone()) {
                return w;
            }
        }
    }
}

/// Spellings of one base word.
struct Variants {
    base: String,
    /// Lexicon entry, tagged `<int>`.
    intentional: String,
    /// Elongated last cluster, tagged `<rep>`.
    elongated: String,
    /// Lexicon entry, tagged `<msp>`.
    unintentional: String,
}

fn variants(base: &str) -> Variants {
    let clusters = grapheme_clusters(base);
    let last = clusters.last().expect("non-empty base").as_str().to_string();
    let mut unintentional = String::new();
    let mut toned = false;
    for c in &clusters {
        unintentional.push_str(c.as_str());
        if !toned && crate::thai_script::classify_char(c.base()) == crate::thai_script::CharClass::Consonant {
            unintentional.push('\u{0E48}');
            toned = true;
        }
    }
    Variants {
        base: base.to_string(),
        intentional: format!("{base}ว์"),
        elongated: format!("{base}{}", last.repeat(3)),
        unintentional,
    }
}

fn uniform(rng: &mut ChaCha8Rng, dim: usize, half_width: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-half_width..half_width)).collect()
}

fn unit(rng: &mut ChaCha8Rng, dim: usize, length: f64) -> Vec<f64> {
    let v = uniform(rng, dim, 1.0);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm * length).collect()
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn build(cfg: &SyntheticConfig) -> Result<SyntheticCorpus> {
    let mut vocab = Vocab {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        used: Default::default(),
    };
    let class_words: Vec<Vec<String>> = (0..3)
        .map(|_| (0..cfg.class_words).map(|_| vocab.word()).collect())
        .collect();
    let fillers: Vec<String> = (0..cfg.fillers).map(|_| vocab.word()).collect();
    let train_bases: Vec<Variants> = (0..cfg.base_words).map(|_| variants(&vocab.word())).collect();
    let test_bases: Vec<Variants> = (0..cfg.base_words).map(|_| variants(&vocab.word())).collect();

    let mut rng = vocab.rng;
    let s_int = unit(&mut rng, cfg.dim, cfg.style_strength);
    let s_unint = unit(&mut rng, cfg.dim, cfg.style_strength);

    let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
    for words in &class_words {
        let direction = unit(&mut rng, cfg.dim, cfg.class_strength);
        for w in words {
            rows.push((w.clone(), add(&uniform(&mut rng, cfg.dim, 1.0), &direction)));
        }
    }
    for w in &fillers {
        rows.push((w.clone(), uniform(&mut rng, cfg.dim, 1.0)));
    }
    let mut lexicon_tsv = String::new();
    let mut wordlist = String::from("# synthetic vocabulary\n");
    for w in class_words.iter().flatten().chain(&fillers) {
        wordlist.push_str(w);
        wordlist.push('\n');
    }
    for v in train_bases.iter().chain(&test_bases) {
        let base = uniform(&mut rng, cfg.dim, 1.0);
        for (form, style) in [(&v.intentional, &s_int), (&v.elongated, &s_int), (&v.unintentional, &s_unint)] {
            let noise = uniform(&mut rng, cfg.dim, cfg.noise);
            rows.push((form.clone(), add(&add(&base, style), &noise)));
        }
        rows.push((v.base.clone(), base));
        wordlist.push_str(&v.base);
        wordlist.push('\n');
        lexicon_tsv.push_str(&format!("{}\t{}\tintentional\tconsonant_deviation\n", v.intentional, v.base));
        lexicon_tsv.push_str(&format!("{}\t{}\tunintentional\ttone_confusion\n", v.unintentional, v.base));
    }
    let lexicon = Lexicon::parse(&lexicon_tsv, &wordlist)?;
    let store = EmbeddingStore::from_rows(cfg.dim, rows)?;

    let n_test = cfg.sentences / 3;
    let mut make = |n: usize, bases: &[Variants]| -> Result<Vec<TokenizedSentence>> {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let label = Sentiment::from_index(i % 3);
            let clear = (i / 3) % 2 == 0;
            let mut tokens: Vec<String> = (0..rng.gen_range(2..=4))
                .map(|_| fillers.choose(&mut rng).expect("fillers").clone())
                .collect();
            let cue = if clear {
                class_words[label.index()].choose(&mut rng).expect("class words").clone()
            } else {
                let v = bases.choose(&mut rng).expect("bases");
                match label {
                    Sentiment::Positive if rng.gen_bool(0.5) => v.intentional.clone(),
                    Sentiment::Positive => v.elongated.clone(),
                    Sentiment::Negative => v.unintentional.clone(),
                    Sentiment::Neutral => v.base.clone(),
                }
            };
            let at = rng.gen_range(0..=tokens.len());
            tokens.insert(at, cue);
            out.push(TokenizedSentence::from_tokens(tokens, Some(label))?);
        }
        out.shuffle(&mut rng);
        Ok(out)
    };
    let train = make(cfg.sentences - n_test, &train_bases)?;
    let test = make(n_test, &test_bases)?;

    Ok(SyntheticCorpus {
        lexicon,
        store,
        train,
        test,
        lexicon_tsv,
        wordlist,
    })
}

/// Trains and evaluates every feature mode on the held-out split.
pub fn run_all_modes(corpus: &SyntheticCorpus, config: TrainConfig) -> Result<Vec<(FeatureMode, EvalReport)>> {
    FeatureMode::ALL
        .into_iter()
        .map(|mode| {
            let model = train(&corpus.train, mode, &corpus.store, &corpus.lexicon, config)?;
            let report = evaluate(&model, &corpus.test, &corpus.store, &corpus.lexicon, Subset::All)?;
            Ok((mode, report))
        })
        .collect()
}
