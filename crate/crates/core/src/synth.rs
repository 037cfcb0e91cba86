//! Seeded synthetic corpora with a planted lexicon signal.
//!
//! Sentiment is carried by invented polar words. The training split sees
//! only part of that vocabulary, while the planted lexicon covers most of
//! it, so lexicon features generalize where word n-grams cannot. Label
//! noise, off-polarity distractors, and label-independent casing and
//! punctuation keep the task from being trivial.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{LabeledMessage, Lexicon, LexiconOrigin, Polarity, TermInstance};
use crate::error::Result;
use crate::features::DEFAULT_STOPWORDS;
use crate::lexicon_builder::SeedSet;
use crate::negation::DEFAULT_NEGATION_WORDS;
use crate::tokenizer::DEFAULT_WORDLIST;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub polar_words: usize,
    pub neutral_words: usize,
    /// Probability that a gold label is replaced by another class.
    pub label_noise: f64,
    /// Fraction of polar words present in the planted lexicon.
    pub lexicon_coverage: f64,
    /// Fraction of planted entries with the wrong polarity.
    pub lexicon_error: f64,
    /// Per-message probability of each label-independent surface cue.
    pub surface_noise: f64,
    pub test_fraction: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            polar_words: 150,
            neutral_words: 300,
            label_noise: 0.08,
            lexicon_coverage: 0.85,
            lexicon_error: 0.03,
            surface_noise: 0.1,
            test_fraction: 0.3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub neutral: Vec<String>,
}

const ONSETS: [&str; 14] = [
    "b", "d", "f", "g", "k", "l", "m", "p", "r", "s", "t", "v", "z", "sh",
];
const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];

fn invent_word(rng: &mut ChaCha8Rng) -> String {
    let syllables = rng.gen_range(2..=3);
    (0..syllables)
        .map(|_| {
            format!(
                "{}{}",
                ONSETS.choose(rng).unwrap(),
                VOWELS.choose(rng).unwrap()
            )
        })
        .collect()
}

impl Vocabulary {
    /// Disjoint invented word sets that avoid the bundled stopword,
    /// negation, and segmentation lists.
    pub fn generate(polar: usize, neutral: usize, rng: &mut ChaCha8Rng) -> Vocabulary {
        let mut seen: HashSet<String> = HashSet::new();
        let mut draw = |n: usize, rng: &mut ChaCha8Rng| {
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let w = invent_word(rng);
                if DEFAULT_STOPWORDS.contains(&w)
                    || DEFAULT_WORDLIST.contains(&w)
                    || DEFAULT_NEGATION_WORDS.is_negation(&w)
                    || !seen.insert(w.clone())
                {
                    continue;
                }
                out.push(w);
            }
            out
        };
        let positive = draw(polar, rng);
        let negative = draw(polar, rng);
        let neutral = draw(neutral, rng);
        Vocabulary {
            positive,
            negative,
            neutral,
        }
    }

    fn polar(&self, p: Polarity) -> &[String] {
        match p {
            Polarity::Positive => &self.positive,
            Polarity::Negative => &self.negative,
            Polarity::Neutral => &self.neutral,
        }
    }

    /// Manual-origin polarity lexicon: positive words score +1 under
    /// `positive` and -1 under `negative`, negative words the reverse.
    pub fn planted_lexicon(
        &self,
        name: &str,
        coverage: f64,
        error: f64,
        rng: &mut ChaCha8Rng,
    ) -> Lexicon {
        let mut lex = Lexicon::new(name, LexiconOrigin::Manual);
        lex.affects = vec!["positive".into(), "negative".into()];
        for (words, sign) in [(&self.positive, 1.0), (&self.negative, -1.0)] {
            for w in words {
                if rng.gen_bool(coverage) {
                    let s = if rng.gen_bool(error) { -sign } else { sign };
                    lex.insert(w.clone(), "positive", s);
                    lex.insert(w.clone(), "negative", -s);
                }
            }
        }
        lex
    }
}

fn sample_class(rng: &mut ChaCha8Rng, weights: [f64; 3]) -> Polarity {
    let r: f64 = rng.gen::<f64>() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (p, w) in Polarity::ALL.iter().zip(weights) {
        acc += w;
        if r < acc {
            return *p;
        }
    }
    Polarity::Positive
}

fn opposite(p: Polarity) -> Polarity {
    match p {
        Polarity::Positive => Polarity::Negative,
        Polarity::Negative => Polarity::Positive,
        Polarity::Neutral => Polarity::Neutral,
    }
}

fn noisy_label(label: Polarity, noise: f64, rng: &mut ChaCha8Rng) -> Polarity {
    if rng.gen_bool(noise) {
        *Polarity::ALL
            .iter()
            .filter(|&&p| p != label)
            .collect::<Vec<_>>()
            .choose(rng)
            .copied()
            .unwrap()
    } else {
        label
    }
}

fn pick(words: &[String], rng: &mut ChaCha8Rng) -> String {
    words.choose(rng).unwrap().clone()
}

/// Uppercases a filler, appends a `!!`, or elongates a vowel, each with
/// probability `rate` and independently of the label.
fn surface_noise(tokens: &mut Vec<String>, rate: f64, rng: &mut ChaCha8Rng) {
    if tokens.is_empty() {
        return;
    }
    if rng.gen_bool(rate) {
        let i = rng.gen_range(0..tokens.len());
        tokens[i] = tokens[i].to_uppercase();
    }
    if rng.gen_bool(rate) {
        let i = rng.gen_range(0..tokens.len());
        let w = &tokens[i];
        let last = w.chars().last().unwrap();
        tokens[i] = format!("{w}{last}{last}");
    }
    if rng.gen_bool(rate) {
        tokens.push("!!".into());
    }
}

#[derive(Debug, Clone)]
pub struct MessageSplit {
    pub train: Vec<LabeledMessage>,
    pub test: Vec<LabeledMessage>,
    pub lexicon: Lexicon,
    pub vocabulary: Vocabulary,
}

/// `n` messages split into train and test; class mix positive 35%,
/// negative 25%, neutral 40%.
pub fn planted_messages(n: usize, cfg: &SynthConfig, seed: u64) -> MessageSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocabulary = Vocabulary::generate(cfg.polar_words, cfg.neutral_words, &mut rng);
    let lexicon =
        vocabulary.planted_lexicon("planted", cfg.lexicon_coverage, cfg.lexicon_error, &mut rng);
    let mut messages = Vec::with_capacity(n);
    for i in 0..n {
        let label = sample_class(&mut rng, [0.25, 0.40, 0.35]);
        let mut tokens: Vec<String> = (0..rng.gen_range(4..=9))
            .map(|_| pick(&vocabulary.neutral, &mut rng))
            .collect();
        let mut polar = Vec::new();
        if label == Polarity::Neutral {
            if rng.gen_bool(0.2) {
                let p = if rng.gen_bool(0.5) {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                polar.push(pick(vocabulary.polar(p), &mut rng));
            }
        } else {
            for _ in 0..rng.gen_range(1..=2) {
                polar.push(pick(vocabulary.polar(label), &mut rng));
            }
            if rng.gen_bool(0.15) {
                polar.push(pick(vocabulary.polar(opposite(label)), &mut rng));
            }
        }
        for w in polar {
            let at = rng.gen_range(0..=tokens.len());
            tokens.insert(at, w);
        }
        surface_noise(&mut tokens, cfg.surface_noise, &mut rng);
        messages.push(LabeledMessage {
            id: format!("m{i}"),
            text: tokens.join(" "),
            label: noisy_label(label, cfg.label_noise, &mut rng),
            tagged: None,
        });
    }
    let n_test = (n as f64 * cfg.test_fraction).round() as usize;
    let train = messages.split_off(n_test.min(n));
    MessageSplit {
        train,
        test: messages,
        lexicon,
        vocabulary,
    }
}

#[derive(Debug, Clone)]
pub struct TermSplit {
    pub train: Vec<TermInstance>,
    pub test: Vec<TermInstance>,
    pub lexicon: Lexicon,
    pub vocabulary: Vocabulary,
}

/// Term instances whose target words carry the label; the context around
/// each target holds fillers and label-independent polar words. Class mix
/// positive 50%, negative 35%, neutral 15%.
pub fn planted_terms(n: usize, cfg: &SynthConfig, seed: u64) -> TermSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocabulary = Vocabulary::generate(cfg.polar_words, cfg.neutral_words, &mut rng);
    let lexicon =
        vocabulary.planted_lexicon("planted", cfg.lexicon_coverage, cfg.lexicon_error, &mut rng);
    let mut instances = Vec::with_capacity(n);
    for i in 0..n {
        let label = sample_class(&mut rng, [0.35, 0.15, 0.50]);
        let target: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| pick(vocabulary.polar(label), &mut rng))
            .collect();
        let side = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let mut words: Vec<String> = (0..rng.gen_range(1..=6))
                .map(|_| pick(&vocabulary.neutral, rng))
                .collect();
            if rng.gen_bool(0.5) {
                let p = sample_class(rng, [1.0, 1.0, 1.0]);
                let at = rng.gen_range(0..=words.len());
                words.insert(at, pick(vocabulary.polar(p), rng));
            }
            words
        };
        let left = side(&mut rng);
        let right = side(&mut rng);
        let start = left.len();
        let end = start + target.len() - 1;
        let tokens: Vec<String> = left.into_iter().chain(target).chain(right).collect();
        instances.push(TermInstance {
            id: format!("t{i}"),
            text: tokens.join(" "),
            span: (start, end),
            label: noisy_label(label, cfg.label_noise, &mut rng),
        });
    }
    let n_test = (n as f64 * cfg.test_fraction).round() as usize;
    let train = instances.split_off(n_test.min(n));
    TermSplit {
        train,
        test: instances,
        lexicon,
        vocabulary,
    }
}

/// Unlabeled messages that each carry one seed hashtag, for lexicon
/// induction. Returns the raw texts and the seed set.
pub fn seed_hashtag_collection(
    vocabulary: &Vocabulary,
    n: usize,
    seed: u64,
) -> Result<(Vec<String>, SeedSet)> {
    let positive = ["#happy", "#love", "#great", "#excited"];
    let negative = ["#sad", "#angry", "#awful", "#fail"];
    let seeds = SeedSet::new(positive, negative)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let texts = (0..n)
        .map(|_| {
            let polarity = sample_class(&mut rng, [1.0, 0.0, 1.0]);
            let mut tokens: Vec<String> = (0..rng.gen_range(3..=7))
                .map(|_| pick(&vocabulary.neutral, &mut rng))
                .collect();
            for _ in 0..rng.gen_range(1..=3) {
                let at = rng.gen_range(0..=tokens.len());
                tokens.insert(at, pick(vocabulary.polar(polarity), &mut rng));
            }
            let tags: &[&str] = if polarity == Polarity::Positive {
                &positive
            } else {
                &negative
            };
            tokens.push(tags.choose(&mut rng).unwrap().to_string());
            tokens.join(" ")
        })
        .collect();
    Ok((texts, seeds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::tokenize_message;

    #[test]
    fn seeded_and_sized() {
        let cfg = SynthConfig::default();
        let a = planted_messages(100, &cfg, 5);
        let b = planted_messages(100, &cfg, 5);
        assert_eq!(a.train, b.train);
        assert_eq!(a.train.len() + a.test.len(), 100);
        assert_eq!(a.test.len(), 30);
    }

    #[test]
    fn term_spans_match_tokens() {
        let split = planted_terms(200, &SynthConfig::default(), 9);
        for t in split.train.iter().chain(&split.test) {
            let n = tokenize_message(&t.text).len();
            assert!(t.span.0 <= t.span.1 && t.span.1 < n, "{t:?}");
        }
    }

    #[test]
    fn vocabularies_are_disjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = Vocabulary::generate(50, 50, &mut rng);
        let all: HashSet<&String> = v
            .positive
            .iter()
            .chain(&v.negative)
            .chain(&v.neutral)
            .collect();
        assert_eq!(all.len(), 150);
    }
}
