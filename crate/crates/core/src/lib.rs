//! Tweet and SMS sentiment classification.
//!
//! The pipeline: tokenize, mark negated contexts, look up manual and induced
//! sentiment lexicons, extract sparse message- or term-level features, train
//! a one-vs-rest linear SVM, and report the macro-F of the positive and
//! negative classes.
//!
//! ```
//! use sentikit::tokenizer::tokenize_message;
//!
//! let msg = tokenize_message("I LOVE this!!! :)");
//! let surfaces: Vec<&str> = msg.tokens.iter().map(|t| t.surface.as_str()).collect();
//! assert_eq!(surfaces, ["I", "LOVE", "this", "!!!", ":)"]);
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod lexicon_builder;
pub mod linear_model;
pub mod negation;
pub mod synth;
pub mod tokenizer;

pub use corpus::{LabeledMessage, Lexicon, Polarity, TermInstance};
pub use error::{Error, Result};
pub use features::{FeatureConfig, FeatureDictionary, FeatureGroup, FeatureVector, Resources};
pub use linear_model::LinearModel;
