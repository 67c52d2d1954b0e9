//! Detection, correction and classification of Thai misspellings, and
//! sentiment features that keep the information misspellings carry.
//!
//! The pipeline runs segmentation ([`segmenter`]), detection and correction
//! against a dictionary ([`lexicon`], [`detector`]), then either annotates
//! sentences with tag tokens ([`mst`]) or averages misspelt and corrected
//! word vectors ([`mae`]) before classification ([`classifier`]).

pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod detector;
pub mod error;
pub mod lexicon;
pub mod mae;
pub mod mst;
pub mod patterns;
pub mod segmenter;
pub mod stats;
pub mod synthetic;
pub mod thai_script;

pub use classifier::{evaluate, featurize, train, EvalReport, FeatureMode, SentimentModel, Subset, TrainConfig};
pub use detector::{correct, detect, MispTag};
pub use error::{Error, Result};
pub use lexicon::{Intention, Lexicon, LexiconEntry};
pub use mae::{embed_token, load_embeddings, mae_vector, EmbeddingStore};
pub use mst::{annotate, AugmentedSentence};
pub use patterns::{classify_pattern, PatternLabel};
pub use segmenter::{segment, Sentiment, TokenizedSentence};
