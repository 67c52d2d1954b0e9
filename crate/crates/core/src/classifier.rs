//! Sentence sentiment classifier over averaged word vectors, with the five
//! feature configurations compared in the experiments.
//!
//! The model is multinomial logistic regression trained by full-batch
//! gradient descent from zero weights, so training is fully deterministic.
//! Features are the mean token vector followed by the four tag counts
//! (`<lol>`, `<rep>`, `<int>`, `<msp>`), which stay zero unless the mode
//! includes tag tokens.
//!
//! The averaged embedding is applied at test time only: a model trained in
//! `Mae` mode sees raw token vectors during training, exactly like `None`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{correct, detect};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::mae::{embed_token, mae_vector, EmbeddingStore};
use crate::mst::annotate;
use crate::segmenter::{Sentiment, TokenizedSentence};

pub const TAG_FEATURES: usize = 4;
pub const MODEL_FORMAT_VERSION: u32 = 1;
const NUM_CLASSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureMode {
    /// Raw tokens.
    #[serde(rename = "none")]
    None_,
    /// Every token corrected before lookup.
    #[serde(rename = "norm")]
    Norm,
    /// Averaged misspelt/corrected vectors at test time.
    #[serde(rename = "mae")]
    Mae,
    /// Raw tokens plus tag counts.
    #[serde(rename = "mst")]
    Mst,
    #[serde(rename = "mae_mst")]
    MaeMst,
}

impl FeatureMode {
    pub const ALL: [FeatureMode; 5] = [
        FeatureMode::None_,
        FeatureMode::Norm,
        FeatureMode::Mae,
        FeatureMode::Mst,
        FeatureMode::MaeMst,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureMode::None_ => "none",
            FeatureMode::Norm => "norm",
            FeatureMode::Mae => "mae",
            FeatureMode::Mst => "mst",
            FeatureMode::MaeMst => "mae_mst",
        }
    }

    pub fn uses_tags(self) -> bool {
        matches!(self, FeatureMode::Mst | FeatureMode::MaeMst)
    }

    pub fn uses_mae(self) -> bool {
        matches!(self, FeatureMode::Mae | FeatureMode::MaeMst)
    }

    /// Mode used to featurize training data for a model of this mode.
    pub fn training_view(self) -> FeatureMode {
        match self {
            FeatureMode::Mae => FeatureMode::None_,
            FeatureMode::MaeMst => FeatureMode::Mst,
            m => m,
        }
    }
}

impl fmt::Display for FeatureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown feature mode `{s}` (none|norm|mae|mst|mae_mst)")))
    }
}

/// Feature vector of length `store.dim() + 4`. Empty sentences map to zeros.
pub fn featurize(
    sentence: &TokenizedSentence,
    mode: FeatureMode,
    store: &EmbeddingStore,
    lex: &Lexicon,
) -> Result<Vec<f64>> {
    let dim = store.dim();
    let mut out = vec![0.0; dim + TAG_FEATURES];
    if sentence.is_empty() {
        return Ok(out);
    }
    for tok in &sentence.tokens {
        let v = match mode {
            FeatureMode::None_ | FeatureMode::Mst => embed_token(store, tok).0,
            FeatureMode::Norm => embed_token(store, &correct(tok, lex)).0,
            FeatureMode::Mae | FeatureMode::MaeMst => mae_vector(store, tok, lex),
        };
        for (o, x) in out.iter_mut().zip(&v) {
            *o += x;
        }
    }
    let n = sentence.len() as f64;
    for o in &mut out[..dim] {
        *o /= n;
    }
    if mode.uses_tags() {
        let counts = annotate(sentence, lex)?.count_vector();
        for (o, c) in out[dim..].iter_mut().zip(counts) {
            *o = c as f64;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Recorded in the model. Training is full-batch from zero weights, so
    /// the seed does not influence the result.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 500,
            learning_rate: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentModel {
    pub format_version: u32,
    pub dim: usize,
    pub mode: FeatureMode,
    pub seed: u64,
    pub epochs: usize,
    pub learning_rate: f64,
    /// `3 x (dim + 4)`, row-major, rows in negative/neutral/positive order.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl SentimentModel {
    /// A model with all parameters zero.
    pub fn zeros(dim: usize, mode: FeatureMode, config: TrainConfig) -> Self {
        SentimentModel {
            format_version: MODEL_FORMAT_VERSION,
            dim,
            mode,
            seed: config.seed,
            epochs: config.epochs,
            learning_rate: config.learning_rate,
            weights: vec![0.0; NUM_CLASSES * (dim + TAG_FEATURES)],
            bias: vec![0.0; NUM_CLASSES],
        }
    }

    pub fn width(&self) -> usize {
        self.dim + TAG_FEATURES
    }

    /// Same parameters, featurized under another mode at evaluation.
    pub fn with_mode(&self, mode: FeatureMode) -> Self {
        SentimentModel {
            mode,
            ..self.clone()
        }
    }

    pub fn scores(&self, x: &[f64]) -> [f64; NUM_CLASSES] {
        let w = self.width();
        std::array::from_fn(|k| {
            let row = &self.weights[k * w..(k + 1) * w];
            self.bias[k] + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>()
        })
    }

    pub fn predict_features(&self, x: &[f64]) -> Sentiment {
        Sentiment::from_index(argmax(&self.scores(x)))
    }

    pub fn predict(&self, sentence: &TokenizedSentence, store: &EmbeddingStore, lex: &Lexicon) -> Result<Sentiment> {
        Ok(self.predict_features(&featurize(sentence, self.mode, store, lex)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: SentimentModel =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad model file: {e}")))?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "model format version {} is not supported (expected {MODEL_FORMAT_VERSION})",
                m.format_version
            )));
        }
        if m.dim == 0 || m.weights.len() != NUM_CLASSES * m.width() || m.bias.len() != NUM_CLASSES {
            return Err(Error::invalid("model parameter shapes do not match its dimension"));
        }
        Ok(m)
    }
}

/// Index of the largest score; ties go to the lowest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / total).collect()
}

/// Mean cross-entropy of the model on feature rows.
pub fn cross_entropy(model: &SentimentModel, xs: &[Vec<f64>], ys: &[Sentiment]) -> f64 {
    let total: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| -softmax(&model.scores(x))[y.index()].max(f64::MIN_POSITIVE).ln())
        .sum();
    total / xs.len() as f64
}

/// Gradient descent on precomputed features. `on_epoch` receives the loss
/// before each update.
pub fn fit_features(
    model: &mut SentimentModel,
    xs: &[Vec<f64>],
    ys: &[Sentiment],
    mut on_epoch: impl FnMut(usize, f64),
) {
    let w = model.width();
    let n = xs.len() as f64;
    for epoch in 0..model.epochs {
        let mut gw = vec![0.0; model.weights.len()];
        let mut gb = [0.0; NUM_CLASSES];
        let mut loss = 0.0;
        for (x, y) in xs.iter().zip(ys) {
            let p = softmax(&model.scores(x));
            loss -= p[y.index()].max(f64::MIN_POSITIVE).ln();
            for k in 0..NUM_CLASSES {
                let err = p[k] - if k == y.index() { 1.0 } else { 0.0 };
                gb[k] += err;
                for (g, xi) in gw[k * w..(k + 1) * w].iter_mut().zip(x) {
                    *g += err * xi;
                }
            }
        }
        on_epoch(epoch, loss / n);
        let step = model.learning_rate / n;
        for (p, g) in model.weights.iter_mut().zip(&gw) {
            *p -= step * g;
        }
        for (p, g) in model.bias.iter_mut().zip(gb) {
            *p -= step * g;
        }
    }
}

pub fn train(
    corpus: &[TokenizedSentence],
    mode: FeatureMode,
    store: &EmbeddingStore,
    lex: &Lexicon,
    config: TrainConfig,
) -> Result<SentimentModel> {
    if corpus.is_empty() {
        return Err(Error::invalid("training corpus is empty"));
    }
    let mut ys = Vec::with_capacity(corpus.len());
    for (i, s) in corpus.iter().enumerate() {
        ys.push(s.label.ok_or_else(|| Error::invalid(format!("training sentence {} has no label", i + 1)))?);
    }
    let first = ys[0];
    if ys.iter().all(|&y| y == first) {
        log::warn!("training corpus has a single class ({first}); the model will predict it everywhere");
    }
    let view = mode.training_view();
    let xs = corpus
        .iter()
        .map(|s| featurize(s, view, store, lex))
        .collect::<Result<Vec<_>>>()?;
    let mut model = SentimentModel::zeros(store.dim(), mode, config);
    fit_features(&mut model, &xs, &ys, |epoch, loss| {
        log::debug!("epoch {epoch}: loss {loss:.6}");
    });
    Ok(model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subset {
    All,
    /// Sentences with at least one detected misspelling.
    MispOnly,
    /// The `MispOnly` sentences with every token corrected.
    NormOnly,
}

impl Subset {
    pub fn as_str(self) -> &'static str {
        match self {
            Subset::All => "all",
            Subset::MispOnly => "misp_only",
            Subset::NormOnly => "norm_only",
        }
    }
}

impl FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Subset::All),
            "misp" | "misp_only" => Ok(Subset::MispOnly),
            "norm" | "norm_only" => Ok(Subset::NormOnly),
            other => Err(Error::invalid(format!("unknown subset `{other}` (all|misp|norm)"))),
        }
    }
}

/// Rows are gold labels, columns predictions, both in negative/neutral/positive order.
pub type Confusion = [[usize; NUM_CLASSES]; NUM_CLASSES];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub mode: FeatureMode,
    pub subset: Subset,
    pub n: usize,
    pub micro_f1: f64,
    pub accuracy: f64,
    pub per_class_f1: BTreeMap<Sentiment, f64>,
    pub confusion: Confusion,
}

impl EvalReport {
    pub fn from_confusion(confusion: Confusion, mode: FeatureMode, subset: Subset) -> Self {
        let n: usize = confusion.iter().flatten().sum();
        let correct: usize = (0..NUM_CLASSES).map(|k| confusion[k][k]).sum();
        let accuracy = if n == 0 { 0.0 } else { correct as f64 / n as f64 };
        let micro_f1 = micro_f1(&confusion);
        assert!(
            (micro_f1 - accuracy).abs() < 1e-12,
            "micro-F1 {micro_f1} disagrees with accuracy {accuracy}"
        );
        let per_class_f1 = Sentiment::ALL
            .into_iter()
            .map(|c| {
                let k = c.index();
                let tp = confusion[k][k] as f64;
                let fp: f64 = (0..NUM_CLASSES).filter(|&g| g != k).map(|g| confusion[g][k] as f64).sum();
                let fn_: f64 = (0..NUM_CLASSES).filter(|&p| p != k).map(|p| confusion[k][p] as f64).sum();
                let denom = 2.0 * tp + fp + fn_;
                (c, if denom == 0.0 { 0.0 } else { 2.0 * tp / denom })
            })
            .collect();
        EvalReport {
            mode,
            subset,
            n,
            micro_f1,
            accuracy,
            per_class_f1,
            confusion,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Micro-averaged F1 from pooled true/false positives and false negatives.
#[allow(clippy::needless_range_loop)]
pub fn micro_f1(confusion: &Confusion) -> f64 {
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut fn_ = 0.0;
    for k in 0..NUM_CLASSES {
        tp += confusion[k][k] as f64;
        for j in 0..NUM_CLASSES {
            if j != k {
                fp += confusion[j][k] as f64;
                fn_ += confusion[k][j] as f64;
            }
        }
    }
    if tp == 0.0 {
        return 0.0;
    }
    let precision = tp / (tp + fp);
    let recall = tp / (tp + fn_);
    2.0 * precision * recall / (precision + recall)
}

pub fn confusion_matrix(gold: &[Sentiment], pred: &[Sentiment]) -> Confusion {
    let mut m = [[0; NUM_CLASSES]; NUM_CLASSES];
    for (g, p) in gold.iter().zip(pred) {
        m[g.index()][p.index()] += 1;
    }
    m
}

/// Sentences of `corpus` that belong to `subset`, corrected for `NormOnly`.
pub fn select_subset(corpus: &[TokenizedSentence], subset: Subset, lex: &Lexicon) -> Vec<TokenizedSentence> {
    let has_misp = |s: &TokenizedSentence| s.tokens.iter().any(|t| !detect(t, lex).is_null());
    match subset {
        Subset::All => corpus.to_vec(),
        Subset::MispOnly => corpus.iter().filter(|s| has_misp(s)).cloned().collect(),
        Subset::NormOnly => corpus
            .iter()
            .filter(|s| has_misp(s))
            .map(|s| s.map_tokens(|t| correct(t, lex)))
            .collect(),
    }
}

pub fn evaluate(
    model: &SentimentModel,
    corpus: &[TokenizedSentence],
    store: &EmbeddingStore,
    lex: &Lexicon,
    subset: Subset,
) -> Result<EvalReport> {
    if store.dim() != model.dim {
        return Err(Error::invalid(format!(
            "model expects {}-dimensional embeddings, store has {}",
            model.dim,
            store.dim()
        )));
    }
    let selected = select_subset(corpus, subset, lex);
    if selected.is_empty() {
        return Err(Error::EmptySubset(subset.as_str().to_string()));
    }
    let pairs = selected
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let gold = s
                .label
                .ok_or_else(|| Error::invalid(format!("evaluation sentence {} has no label", i + 1)))?;
            Ok((gold, model.predict(s, store, lex)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (gold, pred): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(EvalReport::from_confusion(confusion_matrix(&gold, &pred), model.mode, subset))
}
