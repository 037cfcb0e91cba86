//! Sentiment lexicon induction from pseudo-labeled messages.
//!
//! Messages are labeled positive/negative by seed hashtags or by emoticons,
//! candidate terms (unigrams, bigrams, non-contiguous pairs) are counted per
//! class, and each term is scored by the difference of its PMI with the
//! positive and the negative class:
//!
//! ```text
//! score(w) = log2(p(w|pos) + eps) - log2(p(w|neg) + eps)
//! p(w|c)   = freq(w, c) / class_count[c]
//! eps      = alpha / |V|
//! ```
//!
//! With `eps = 0` this is exactly `PMI(w,pos) - PMI(w,neg)`. Smoothing the
//! class-conditional rates (rather than the raw counts) keeps every score
//! finite and leaves scores unchanged when the corpus is replicated.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::sync::LazyLock;

use rayon::prelude::*;

use crate::corpus::{parse_word_list, Lexicon, LexiconOrigin, Polarity};
use crate::error::{Error, Result};
use crate::tokenizer::{emoticon_polarity, EmoticonPolarity, TokenKind, TokenizedMessage};

pub const POSITIVE: usize = 0;
pub const NEGATIVE: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSet {
    positive: HashSet<String>,
    negative: HashSet<String>,
}

fn seed_key(tag: &str) -> String {
    let t = tag.trim().to_lowercase();
    if t.starts_with('#') {
        t
    } else {
        format!("#{t}")
    }
}

impl SeedSet {
    pub fn new<I, J, S, T>(positive: I, negative: J) -> Result<SeedSet>
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let positive: HashSet<String> =
            positive.into_iter().map(|s| seed_key(s.as_ref())).collect();
        let negative: HashSet<String> =
            negative.into_iter().map(|s| seed_key(s.as_ref())).collect();
        if positive.is_empty() || negative.is_empty() {
            return Err(Error::InvalidArgument("seed sets must be non-empty".into()));
        }
        if let Some(both) = positive.intersection(&negative).next() {
            return Err(Error::InvalidArgument(format!(
                "seed {both} is both positive and negative"
            )));
        }
        Ok(SeedSet { positive, negative })
    }

    /// Lines `#tag<TAB>positive|negative`.
    pub fn from_reader<R: BufRead>(reader: R) -> Result<SeedSet> {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<seeds>", e))?;
            let fields: Vec<&str> = line.trim_end().split('\t').collect();
            match fields.as_slice() {
                [tag, "positive"] => pos.push(tag.to_string()),
                [tag, "negative"] => neg.push(tag.to_string()),
                [l] if l.trim().is_empty() || l.starts_with("# ") => {}
                _ if line.trim().is_empty() => {}
                _ => return Err(Error::parse(i + 1, "expected tag<TAB>positive|negative")),
            }
        }
        SeedSet::new(pos, neg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<SeedSet> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        SeedSet::from_reader(std::io::BufReader::new(file))
    }

    pub fn positive(&self) -> &HashSet<String> {
        &self.positive
    }

    pub fn negative(&self) -> &HashSet<String> {
        &self.negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PseudoLabel {
    Positive,
    Negative,
    Skip,
}

impl PseudoLabel {
    fn from_presence(pos: bool, neg: bool) -> PseudoLabel {
        match (pos, neg) {
            (true, false) => PseudoLabel::Positive,
            (false, true) => PseudoLabel::Negative,
            _ => PseudoLabel::Skip,
        }
    }

    pub fn polarity(self) -> Option<Polarity> {
        match self {
            PseudoLabel::Positive => Some(Polarity::Positive),
            PseudoLabel::Negative => Some(Polarity::Negative),
            PseudoLabel::Skip => None,
        }
    }
}

pub fn pseudo_label_by_hashtag(message: &TokenizedMessage, seeds: &SeedSet) -> PseudoLabel {
    let mut pos = false;
    let mut neg = false;
    for t in message
        .tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Hashtag)
    {
        let tag = t.lower();
        pos |= seeds.positive.contains(&tag);
        neg |= seeds.negative.contains(&tag);
    }
    PseudoLabel::from_presence(pos, neg)
}

pub fn pseudo_label_by_emoticon(message: &TokenizedMessage) -> PseudoLabel {
    let mut pos = false;
    let mut neg = false;
    for t in &message.tokens {
        match emoticon_polarity(t) {
            EmoticonPolarity::Positive => pos = true,
            EmoticonPolarity::Negative => neg = true,
            EmoticonPolarity::None => {}
        }
    }
    PseudoLabel::from_presence(pos, neg)
}

#[derive(Debug, Clone)]
pub enum Labeling {
    Hashtag(SeedSet),
    Emoticon,
}

impl Labeling {
    pub fn label(&self, message: &TokenizedMessage) -> PseudoLabel {
        match self {
            Labeling::Hashtag(seeds) => pseudo_label_by_hashtag(message, seeds),
            Labeling::Emoticon => pseudo_label_by_emoticon(message),
        }
    }

    /// Lowercased tokens that feed the counts. Polar emoticons are removed
    /// under emoticon labeling; seed hashtags are kept.
    pub fn counting_tokens(&self, message: &TokenizedMessage) -> Vec<String> {
        message
            .tokens
            .iter()
            .filter(|t| match self {
                Labeling::Emoticon => emoticon_polarity(t) == EmoticonPolarity::None,
                Labeling::Hashtag(_) => true,
            })
            .map(|t| t.lower())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Unigram,
    Bigram,
    Pair,
}

impl TermKind {
    pub fn prefix(self) -> &'static str {
        match self {
            TermKind::Unigram => "uni:",
            TermKind::Bigram => "bi:",
            TermKind::Pair => "pair:",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            TermKind::Unigram => "uni",
            TermKind::Bigram => "bi",
            TermKind::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate {
    pub kind: TermKind,
    pub text: String,
    /// Token positions covered by the candidate.
    pub first: usize,
    pub last: usize,
}

impl Candidate {
    /// Namespaced lexicon key, e.g. `bi:good day`.
    pub fn key(&self) -> String {
        format!("{}{}", self.kind.prefix(), self.text)
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.text)
    }
}

pub static DEFAULT_FUNCTION_WORDS: LazyLock<HashSet<String>> =
    LazyLock::new(|| parse_word_list(include_str!("../data/function_words.txt")));

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateFilter {
    /// Pairs touching any of these words are dropped.
    pub function_words: HashSet<String>,
    /// Largest number of tokens allowed between the two parts of a pair.
    pub max_gap: Option<usize>,
}

impl Default for CandidateFilter {
    fn default() -> Self {
        CandidateFilter {
            function_words: DEFAULT_FUNCTION_WORDS.clone(),
            max_gap: None,
        }
    }
}

impl CandidateFilter {
    pub fn unfiltered() -> Self {
        CandidateFilter {
            function_words: HashSet::new(),
            max_gap: None,
        }
    }
}

fn is_pure_punctuation(t: &str) -> bool {
    !t.chars().any(char::is_alphanumeric)
}

fn excluded(t: &str) -> bool {
    t.starts_with('@') || is_pure_punctuation(t)
}

/// Unigrams, contiguous bigrams `a b`, and ordered non-contiguous pairs
/// `A---B` of unigram/bigram parts separated by at least one token.
pub fn extract_candidates<S: AsRef<str>>(tokens: &[S], filter: &CandidateFilter) -> Vec<Candidate> {
    let toks: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
    let n = toks.len();
    let ok: Vec<bool> = toks.iter().map(|t| !excluded(t)).collect();
    let pair_ok: Vec<bool> = toks
        .iter()
        .zip(&ok)
        .map(|(t, &ok)| ok && !filter.function_words.contains(*t))
        .collect();

    let mut out = Vec::new();
    for i in 0..n {
        if ok[i] {
            out.push(Candidate {
                kind: TermKind::Unigram,
                text: toks[i].to_string(),
                first: i,
                last: i,
            });
        }
    }
    for i in 0..n.saturating_sub(1) {
        if ok[i] && ok[i + 1] {
            out.push(Candidate {
                kind: TermKind::Bigram,
                text: format!("{} {}", toks[i], toks[i + 1]),
                first: i,
                last: i + 1,
            });
        }
    }

    // pair parts: (first, last, text)
    let mut parts: Vec<(usize, usize, String)> = Vec::new();
    for i in 0..n {
        if pair_ok[i] {
            parts.push((i, i, toks[i].to_string()));
            if i + 1 < n && pair_ok[i + 1] {
                parts.push((i, i + 1, format!("{} {}", toks[i], toks[i + 1])));
            }
        }
    }
    for a in &parts {
        for b in &parts {
            if b.0 <= a.1 + 1 {
                continue;
            }
            let gap = b.0 - a.1 - 1;
            if filter.max_gap.is_some_and(|g| gap > g) {
                continue;
            }
            out.push(Candidate {
                kind: TermKind::Pair,
                text: format!("{}---{}", a.2, b.2),
                first: a.0,
                last: b.1,
            });
        }
    }
    out
}

/// Per-class candidate counts. Index with [`POSITIVE`] / [`NEGATIVE`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CooccurrenceCounts {
    pub term_class_count: HashMap<String, [u64; 2]>,
    pub class_count: [u64; 2],
    pub total: u64,
    pub messages: [u64; 2],
}

fn class_index(class: Polarity) -> Result<usize> {
    match class {
        Polarity::Positive => Ok(POSITIVE),
        Polarity::Negative => Ok(NEGATIVE),
        Polarity::Neutral => Err(Error::InvalidArgument(
            "co-occurrence counting takes positive or negative messages only".into(),
        )),
    }
}

impl CooccurrenceCounts {
    pub fn add_message<S: AsRef<str>>(
        &mut self,
        tokens: &[S],
        class: Polarity,
        filter: &CandidateFilter,
        per_message: bool,
    ) -> Result<()> {
        let c = class_index(class)?;
        let mut keys: Vec<String> = extract_candidates(tokens, filter)
            .iter()
            .map(Candidate::key)
            .collect();
        if per_message {
            keys.sort_unstable();
            keys.dedup();
        }
        self.messages[c] += 1;
        for k in keys {
            self.term_class_count.entry(k).or_insert([0, 0])[c] += 1;
            self.class_count[c] += 1;
            self.total += 1;
        }
        Ok(())
    }

    /// Commutative, associative merge of two shards.
    pub fn merge(mut self, other: CooccurrenceCounts) -> CooccurrenceCounts {
        for (k, v) in other.term_class_count {
            let e = self.term_class_count.entry(k).or_insert([0, 0]);
            e[0] += v[0];
            e[1] += v[1];
        }
        for c in 0..2 {
            self.class_count[c] += other.class_count[c];
            self.messages[c] += other.messages[c];
        }
        self.total += other.total;
        self
    }

    pub fn freq(&self, term: &str) -> [u64; 2] {
        self.term_class_count.get(term).copied().unwrap_or([0, 0])
    }

    pub fn vocabulary_size(&self) -> usize {
        self.term_class_count.len()
    }
}

pub fn count_cooccurrences<'a, I, S>(
    corpus: I,
    filter: &CandidateFilter,
    per_message: bool,
) -> Result<CooccurrenceCounts>
where
    I: IntoIterator<Item = (&'a [S], Polarity)>,
    S: AsRef<str> + 'a,
{
    let mut counts = CooccurrenceCounts::default();
    for (tokens, class) in corpus {
        counts.add_message(tokens, class, filter, per_message)?;
    }
    Ok(counts)
}

fn class_rate(freq: u64, class_total: u64) -> f64 {
    if class_total == 0 {
        0.0
    } else {
        freq as f64 / class_total as f64
    }
}

/// `PMI(w,pos) - PMI(w,neg)` in bits, with smoothing `alpha / |V|` on the
/// class-conditional rates.
pub fn pmi_score(counts: &CooccurrenceCounts, term: &str, alpha: f64) -> f64 {
    let [fp, fn_] = counts.freq(term);
    let eps = alpha / counts.vocabulary_size().max(1) as f64;
    let p_pos = class_rate(fp, counts.class_count[POSITIVE]);
    let p_neg = class_rate(fn_, counts.class_count[NEGATIVE]);
    (p_pos + eps).log2() - (p_neg + eps).log2()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildParams {
    pub min_count: u64,
    pub alpha: f64,
    /// Count each candidate once per message instead of once per occurrence.
    pub per_message: bool,
    pub filter: CandidateFilter,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams {
            min_count: 5,
            alpha: 0.5,
            per_message: false,
            filter: CandidateFilter::default(),
        }
    }
}

const SHARD: usize = 2048;

/// Pseudo-labels and counts a corpus in parallel shards.
pub fn collect_counts(
    corpus: &[TokenizedMessage],
    labeling: &Labeling,
    params: &BuildParams,
) -> Result<CooccurrenceCounts> {
    corpus
        .par_chunks(SHARD)
        .map(|shard| {
            let mut counts = CooccurrenceCounts::default();
            for msg in shard {
                if let Some(class) = labeling.label(msg).polarity() {
                    let tokens = labeling.counting_tokens(msg);
                    counts.add_message(&tokens, class, &params.filter, params.per_message)?;
                }
            }
            Ok(counts)
        })
        .try_reduce(CooccurrenceCounts::default, |a, b| Ok(a.merge(b)))
}

/// Scores every term seen at least `min_count` times. Affect `positive`
/// holds the score, `negative` its negation.
pub fn lexicon_from_counts(
    counts: &CooccurrenceCounts,
    params: &BuildParams,
    name: &str,
) -> Lexicon {
    let mut lex = Lexicon::new(name, LexiconOrigin::Induced);
    lex.affects = vec!["positive".into(), "negative".into()];
    for (term, f) in &counts.term_class_count {
        if f[0] + f[1] < params.min_count {
            continue;
        }
        let s = pmi_score(counts, term, params.alpha);
        lex.insert(term.clone(), "positive", s);
        lex.insert(term.clone(), "negative", 0.0 - s);
    }
    lex
}

pub fn build_lexicon(
    corpus: &[TokenizedMessage],
    labeling: &Labeling,
    params: &BuildParams,
    name: &str,
) -> Result<Lexicon> {
    if !(params.alpha > 0.0 && params.alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha must be positive, got {}",
            params.alpha
        )));
    }
    let counts = collect_counts(corpus, labeling, params)?;
    if counts.messages == [0, 0] {
        return Err(Error::NoLabeledMessages);
    }
    Ok(lexicon_from_counts(&counts, params, name))
}
