//! Negated contexts: from a negation word up to the next clause punctuation.

use std::collections::HashSet;
use std::sync::LazyLock;

use crate::corpus::parse_word_list;
use crate::tokenizer::{Token, TokenKind};

pub const NEG_SUFFIX: &str = "_NEG";
const CLAUSE_PUNCTUATION: [char; 6] = [',', '.', ':', ';', '!', '?'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegationWords {
    words: HashSet<String>,
}

impl NegationWords {
    pub fn new(words: HashSet<String>) -> Self {
        NegationWords {
            words: words.into_iter().map(|w| w.to_lowercase()).collect(),
        }
    }

    pub fn from_list(text: &str) -> Self {
        NegationWords::new(parse_word_list(text))
    }

    /// Listed words plus anything ending in `n't`.
    pub fn is_negation(&self, word: &str) -> bool {
        let w = word.to_lowercase();
        self.words.contains(&w) || w.ends_with("n't") || w.ends_with("n’t")
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Default for NegationWords {
    fn default() -> Self {
        DEFAULT_NEGATION_WORDS.clone()
    }
}

pub static DEFAULT_NEGATION_WORDS: LazyLock<NegationWords> =
    LazyLock::new(|| NegationWords::from_list(include_str!("../data/negation.txt")));

/// Inclusive, disjoint, ordered token ranges inside negated contexts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NegationAnnotation {
    pub spans: Vec<(usize, usize)>,
}

impl NegationAnnotation {
    pub fn count(&self) -> usize {
        self.spans.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.spans.iter().any(|&(s, e)| s <= index && index <= e)
    }

    pub fn mask(&self, len: usize) -> Vec<bool> {
        let mut mask = vec![false; len];
        for &(s, e) in &self.spans {
            for m in mask.iter_mut().take(e + 1).skip(s) {
                *m = true;
            }
        }
        mask
    }

    pub fn negated_len(&self) -> usize {
        self.spans.iter().map(|(s, e)| e - s + 1).sum()
    }
}

fn closes_context(token: &Token) -> bool {
    matches!(token.kind, TokenKind::Punctuation | TokenKind::Other)
        && token.surface.contains(CLAUSE_PUNCTUATION)
}

/// Empty contexts (a negation word directly followed by clause punctuation or
/// ending the message) are dropped. Negation words inside an open context do
/// not start a new one.
pub fn mark_negation(tokens: &[Token], negation_words: &NegationWords) -> NegationAnnotation {
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for (i, t) in tokens.iter().enumerate() {
        match open {
            Some(start) if closes_context(t) => {
                if i > start {
                    spans.push((start, i - 1));
                }
                open = None;
            }
            Some(_) => {}
            None if negation_words.is_negation(&t.surface) => open = Some(i + 1),
            None => {}
        }
    }
    if let Some(start) = open {
        if start < tokens.len() {
            spans.push((start, tokens.len() - 1));
        }
    }
    NegationAnnotation { spans }
}

pub fn apply_negation_suffix<S: AsRef<str>>(
    words: &[S],
    annotation: &NegationAnnotation,
) -> Vec<String> {
    let mask = annotation.mask(words.len());
    words
        .iter()
        .zip(mask)
        .map(|(w, neg)| {
            if neg {
                format!("{}{NEG_SUFFIX}", w.as_ref())
            } else {
                w.as_ref().to_string()
            }
        })
        .collect()
}

/// Where the negation word sits relative to a target term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegationSite {
    /// Immediately before the target: every target score flips.
    BeforeTarget,
    /// At this index inside the target: scores strictly after it flip.
    At(usize),
}

pub fn flip_term_polarity(scores: &[f64], site: NegationSite) -> Vec<f64> {
    scores
        .iter()
        .enumerate()
        .map(|(i, &s)| match site {
            NegationSite::BeforeTarget => -s,
            NegationSite::At(p) if i > p => -s,
            NegationSite::At(_) => s,
        })
        .collect()
}
