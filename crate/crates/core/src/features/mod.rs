//! Sparse feature vectors, the frozen feature dictionary, and the feature
//! group registry used for ablations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::corpus::{ClusterMap, Lexicon, LexiconOrigin};
use crate::error::{Error, Result};
use crate::negation::NegationWords;
use crate::tokenizer::DEFAULT_WORDLIST;

pub mod message;
pub mod term;

pub use message::{extract_message_features, MessageExtractor};
pub use term::{ablate_namespace, extract_term_features, term_context, TermContext, TermExtractor};

/// Feature name → value. Zero values are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureVector {
    entries: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        let name = name.into();
        if value == 0.0 {
            self.entries.remove(&name);
        } else {
            self.entries.insert(name, value);
        }
    }

    pub fn add(&mut self, name: impl Into<String>, delta: f64) {
        let name = name.into();
        let v = self.entries.get(&name).copied().unwrap_or(0.0) + delta;
        self.set(name, v);
    }

    /// Sets a binary presence feature.
    pub fn flag(&mut self, name: impl Into<String>) {
        self.entries.insert(name.into(), 1.0);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&str, f64) -> bool) {
        self.entries.retain(|k, v| keep(k, *v));
    }

    pub fn extend(&mut self, other: FeatureVector) {
        self.entries.extend(other.entries);
    }

    /// `name<TAB>value` lines sorted by name.
    pub fn dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{k}\t{v}")?;
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.dump(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("feature names are UTF-8")
    }
}

impl FromIterator<(String, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut fv = FeatureVector::new();
        for (k, v) in iter {
            fv.set(k, v);
        }
        fv
    }
}

/// Dense-indexed sparse vector with strictly increasing indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn from_pairs(mut pairs: Vec<(u32, f64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        pairs.dedup_by_key(|p| p.0);
        let (indices, values) = pairs.into_iter().filter(|p| p.1 != 0.0).unzip();
        SparseVector { indices, values }
    }

    pub fn dense(values: &[f64]) -> Self {
        Self::from_pairs(
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        )
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| weights.get(i as usize).copied().unwrap_or(0.0) * v)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .zip(&self.values)
            .map(|(&i, &v)| (i as usize, v))
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

/// Bijection between feature names and dense indices, assigned in
/// lexicographic name order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureDictionary {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl FeatureDictionary {
    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Self {
        let sorted: BTreeSet<String> = names.into_iter().collect();
        let names: Vec<String> = sorted.into_iter().collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as u32))
            .collect();
        FeatureDictionary { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, index: usize) -> Option<&str> {
        self.names.get(index).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Features unknown to the dictionary are dropped.
    pub fn vectorize(&self, fv: &FeatureVector) -> SparseVector {
        SparseVector::from_pairs(
            fv.iter()
                .filter_map(|(k, v)| self.index_of(k).map(|i| (i, v)))
                .collect(),
        )
    }

    /// SHA-256 over the ordered names; ties a model file to its dictionary.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for n in &self.names {
            h.update(n.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for n in &self.names {
            writeln!(w, "{n}")?;
        }
        w.flush()
    }

    pub fn read_from<R: BufRead>(reader: R) -> std::io::Result<Self> {
        let names = reader.lines().collect::<std::io::Result<Vec<String>>>()?;
        Ok(Self::from_names(names))
    }
}

pub fn build_feature_dictionary<'a, I>(vectors: I) -> FeatureDictionary
where
    I: IntoIterator<Item = &'a FeatureVector>,
{
    FeatureDictionary::from_names(
        vectors
            .into_iter()
            .flat_map(|v| v.names().map(str::to_string)),
    )
}

/// A labeled item type plus a way to featurize it under any configuration;
/// lets training, evaluation and ablation treat both tasks alike.
pub trait Extractor: Sync {
    type Item: Sync;

    fn task(&self) -> Task;
    fn config(&self) -> &FeatureConfig;
    fn label(item: &Self::Item) -> crate::corpus::Polarity;
    fn extract_with(&self, item: &Self::Item, config: &FeatureConfig) -> FeatureVector;

    fn extract_item(&self, item: &Self::Item) -> FeatureVector {
        self.extract_with(item, self.config())
    }
}

/// Which extractor a corpus, model, or run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    Message,
    Term,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Message => "message",
            Task::Term => "term",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Task> {
        match s {
            "message" => Ok(Task::Message),
            "term" => Ok(Task::Term),
            other => Err(Error::InvalidArgument(format!(
                "unknown task '{other}' (expected message or term)"
            ))),
        }
    }
}

/// Ablation feature groups. Umbrella groups (`lexicons`, `ngrams`) switch
/// off their members too.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureGroup {
    Lexicons,
    ManualLex,
    AutoLex,
    Ngrams,
    WordNgrams,
    CharNgrams,
    Negation,
    Pos,
    Clusters,
    Encodings,
    Stopwords,
    Target,
    Context,
}

impl FeatureGroup {
    pub const ALL: [FeatureGroup; 13] = [
        FeatureGroup::Lexicons,
        FeatureGroup::ManualLex,
        FeatureGroup::AutoLex,
        FeatureGroup::Ngrams,
        FeatureGroup::WordNgrams,
        FeatureGroup::CharNgrams,
        FeatureGroup::Negation,
        FeatureGroup::Pos,
        FeatureGroup::Clusters,
        FeatureGroup::Encodings,
        FeatureGroup::Stopwords,
        FeatureGroup::Target,
        FeatureGroup::Context,
    ];

    /// Groups that exist in message-level vectors.
    pub const MESSAGE: [FeatureGroup; 10] = [
        FeatureGroup::Lexicons,
        FeatureGroup::ManualLex,
        FeatureGroup::AutoLex,
        FeatureGroup::Ngrams,
        FeatureGroup::WordNgrams,
        FeatureGroup::CharNgrams,
        FeatureGroup::Negation,
        FeatureGroup::Pos,
        FeatureGroup::Clusters,
        FeatureGroup::Encodings,
    ];

    pub const TERM: [FeatureGroup; 11] = [
        FeatureGroup::Ngrams,
        FeatureGroup::WordNgrams,
        FeatureGroup::CharNgrams,
        FeatureGroup::Lexicons,
        FeatureGroup::ManualLex,
        FeatureGroup::AutoLex,
        FeatureGroup::Negation,
        FeatureGroup::Stopwords,
        FeatureGroup::Encodings,
        FeatureGroup::Target,
        FeatureGroup::Context,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureGroup::Lexicons => "lexicons",
            FeatureGroup::ManualLex => "manual-lex",
            FeatureGroup::AutoLex => "auto-lex",
            FeatureGroup::Ngrams => "ngrams",
            FeatureGroup::WordNgrams => "word-ngrams",
            FeatureGroup::CharNgrams => "char-ngrams",
            FeatureGroup::Negation => "negation",
            FeatureGroup::Pos => "pos",
            FeatureGroup::Clusters => "clusters",
            FeatureGroup::Encodings => "encodings",
            FeatureGroup::Stopwords => "stopwords",
            FeatureGroup::Target => "target",
            FeatureGroup::Context => "context",
        }
    }

    fn parent(self) -> Option<FeatureGroup> {
        match self {
            FeatureGroup::ManualLex | FeatureGroup::AutoLex => Some(FeatureGroup::Lexicons),
            FeatureGroup::WordNgrams | FeatureGroup::CharNgrams => Some(FeatureGroup::Ngrams),
            _ => None,
        }
    }

    pub fn valid_names() -> String {
        FeatureGroup::ALL.map(FeatureGroup::name).join(", ")
    }

    /// Parses a comma-separated list.
    pub fn parse_list(list: &str) -> Result<Vec<FeatureGroup>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for FeatureGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeatureGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        FeatureGroup::ALL
            .into_iter()
            .find(|g| g.name() == lower)
            .ok_or_else(|| Error::UnknownGroup {
                name: s.to_string(),
                valid: FeatureGroup::valid_names(),
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureConfig {
    pub disabled: HashSet<FeatureGroup>,
    /// Word unigram presence only (the unigram baseline).
    pub unigrams_only: bool,
    pub max_word_ngram: usize,
    /// N-gram lengths that also get single-token `*` wildcard variants.
    pub wildcard_lengths: Vec<usize>,
    pub char_ngram_lengths: Vec<usize>,
    pub context_window: usize,
    pub long_word_chars: usize,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            disabled: HashSet::new(),
            unigrams_only: false,
            max_word_ngram: 4,
            wildcard_lengths: vec![3, 4],
            char_ngram_lengths: vec![3, 4, 5],
            context_window: 4,
            long_word_chars: 8,
        }
    }
}

impl FeatureConfig {
    pub fn unigram_baseline() -> Self {
        FeatureConfig {
            unigrams_only: true,
            ..Default::default()
        }
    }

    pub fn without(mut self, group: FeatureGroup) -> Self {
        self.disabled.insert(group);
        self
    }

    pub fn is_on(&self, group: FeatureGroup) -> bool {
        !self.disabled.contains(&group)
            && group.parent().is_none_or(|p| !self.disabled.contains(&p))
    }

    pub fn lexicon_on(&self, lexicon: &Lexicon) -> bool {
        match lexicon.origin {
            LexiconOrigin::Manual => self.is_on(FeatureGroup::ManualLex),
            LexiconOrigin::Induced => self.is_on(FeatureGroup::AutoLex),
        }
    }
}

/// Read-only inputs shared by the extractors.
#[derive(Debug, Clone, Default)]
pub struct Resources {
    pub lexicons: Vec<Lexicon>,
    pub clusters: ClusterMap,
    pub negation: NegationWords,
    pub stopwords: HashSet<String>,
    /// Hashtag segmentation vocabulary.
    pub wordlist: HashSet<String>,
    has_pairs: Vec<bool>,
}

pub static DEFAULT_STOPWORDS: std::sync::LazyLock<HashSet<String>> =
    std::sync::LazyLock::new(|| {
        crate::corpus::parse_word_list(include_str!("../../data/stopwords.txt"))
    });

impl Resources {
    /// Bundled negation, stopword and segmentation lists; the wordlist is
    /// extended with every alphabetic unigram of the given lexicons.
    pub fn new(lexicons: Vec<Lexicon>, clusters: ClusterMap) -> Self {
        let mut wordlist = DEFAULT_WORDLIST.clone();
        for lex in &lexicons {
            for term in lex.entries.keys() {
                let word = term.strip_prefix("uni:").unwrap_or(term);
                if !term.starts_with("bi:")
                    && !term.starts_with("pair:")
                    && word.chars().count() > 1
                    && word.chars().all(char::is_alphabetic)
                {
                    wordlist.insert(word.to_lowercase());
                }
            }
        }
        let has_pairs = lexicons
            .iter()
            .map(|l| l.entries.keys().any(|k| k.starts_with("pair:")))
            .collect();
        Resources {
            lexicons,
            clusters,
            negation: NegationWords::default(),
            stopwords: DEFAULT_STOPWORDS.clone(),
            wordlist,
            has_pairs,
        }
    }

    pub fn with_negation(mut self, negation: NegationWords) -> Self {
        self.negation = negation;
        self
    }

    pub(crate) fn lexicon_has_pairs(&self, i: usize) -> bool {
        self.has_pairs.get(i).copied().unwrap_or(false)
    }
}

/// Which statistic "last" reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastRule {
    /// Score of the last item with a positive score.
    LastPositive,
    /// Score of the last item with a non-zero score.
    LastNonZero,
}

/// The four per-affect lexicon statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexiconFeatureBlock {
    pub count_positive_scored: u32,
    pub total_score: f64,
    pub max_score: f64,
    pub last_score: f64,
}

impl LexiconFeatureBlock {
    /// `None` when nothing matched.
    pub fn from_scores(scores: &[f64], rule: LastRule) -> Option<Self> {
        if scores.is_empty() {
            return None;
        }
        let count = scores.iter().filter(|&&s| s > 0.0).count() as u32;
        let total = scores.iter().sum();
        let max = if count > 0 {
            scores.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            0.0
        };
        let last = match rule {
            LastRule::LastPositive => scores.iter().rev().find(|&&s| s > 0.0),
            LastRule::LastNonZero => scores.iter().rev().find(|&&s| s != 0.0),
        }
        .copied()
        .unwrap_or(0.0);
        Some(LexiconFeatureBlock {
            count_positive_scored: count,
            total_score: total,
            max_score: max,
            last_score: last,
        })
    }

    /// Emits `{prefix}|{stat}|{affect}` for cnt, sum, max and last.
    pub fn emit(&self, fv: &mut FeatureVector, prefix: &str, affect: &str) {
        fv.set(
            format!("{prefix}|cnt|{affect}"),
            self.count_positive_scored as f64,
        );
        fv.set(format!("{prefix}|sum|{affect}"), self.total_score);
        fv.set(format!("{prefix}|max|{affect}"), self.max_score);
        fv.set(format!("{prefix}|last|{affect}"), self.last_score);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(names: &[&str]) -> FeatureVector {
        names.iter().map(|n| (n.to_string(), 1.0)).collect()
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut v = FeatureVector::new();
        v.set("a", 0.0);
        assert!(v.is_empty());
        v.add("b", 2.0);
        v.add("b", -2.0);
        assert!(v.is_empty());
    }

    #[test]
    fn dictionary_union_and_order() {
        let a = fv(&["x", "y"]);
        let b = fv(&["y", "z"]);
        let d1 = build_feature_dictionary([&a, &b]);
        let d2 = build_feature_dictionary([&b, &a]);
        assert_eq!(d1.len(), 3);
        assert_eq!(d1, d2);
        assert_eq!(d1.names(), ["x", "y", "z"]);
        assert!(build_feature_dictionary(std::iter::empty()).is_empty());
    }

    #[test]
    fn vectorize_drops_unseen() {
        let d = build_feature_dictionary([&fv(&["b", "d"])]);
        let v = d.vectorize(&fv(&["a", "b", "d"]));
        assert_eq!(v.indices, [0, 1]);
    }

    #[test]
    fn dictionary_file_round_trip() {
        let d = build_feature_dictionary([&fv(&["wng|a b", "lex|x|uni|sum|positive"])]);
        let mut buf = Vec::new();
        d.write_to(&mut buf).unwrap();
        let back = FeatureDictionary::read_from(buf.as_slice()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.fingerprint(), d.fingerprint());
    }

    #[test]
    fn group_parsing() {
        assert_eq!(
            FeatureGroup::parse_list("lexicons, ngrams,POS").unwrap(),
            [
                FeatureGroup::Lexicons,
                FeatureGroup::Ngrams,
                FeatureGroup::Pos
            ]
        );
        let err = FeatureGroup::parse_list("lexicons,bogus").unwrap_err();
        assert!(err.to_string().contains("bogus"));
        assert!(err.to_string().contains("manual-lex"));
    }

    #[test]
    fn umbrella_groups() {
        let c = FeatureConfig::default().without(FeatureGroup::Ngrams);
        assert!(!c.is_on(FeatureGroup::WordNgrams));
        assert!(!c.is_on(FeatureGroup::CharNgrams));
        assert!(c.is_on(FeatureGroup::Lexicons));
        let c = FeatureConfig::default().without(FeatureGroup::ManualLex);
        assert!(c.is_on(FeatureGroup::AutoLex));
    }

    #[test]
    fn lexicon_block_rules() {
        assert!(LexiconFeatureBlock::from_scores(&[], LastRule::LastPositive).is_none());
        let b = LexiconFeatureBlock::from_scores(&[1.0, -3.0, 2.0, -0.5], LastRule::LastPositive)
            .unwrap();
        assert_eq!(b.count_positive_scored, 2);
        assert_eq!(b.total_score, -0.5);
        assert_eq!(b.max_score, 2.0);
        assert_eq!(b.last_score, 2.0);
        let nz = LexiconFeatureBlock::from_scores(&[1.0, -0.5], LastRule::LastNonZero).unwrap();
        assert_eq!(nz.last_score, -0.5);
        let none_pos = LexiconFeatureBlock::from_scores(&[-1.0], LastRule::LastPositive).unwrap();
        assert_eq!((none_pos.max_score, none_pos.last_score), (0.0, 0.0));
    }
}
