//! Message-level feature extraction.
//!
//! Name prefixes: `wng|` word n-grams, `cng|` character n-grams, `caps|`,
//! `pos|`, `hash|`, `lex|`, `punc|`, `emo|`, `elong|`, `clu|`, `neg|`.

use std::collections::BTreeMap;

use super::{
    Extractor, FeatureConfig, FeatureGroup, FeatureVector, LastRule, LexiconFeatureBlock,
    Resources, Task,
};
use crate::corpus::{LabeledMessage, Polarity};
use crate::lexicon_builder::{extract_candidates, CandidateFilter, TermKind};
use crate::negation::{apply_negation_suffix, mark_negation, NegationAnnotation, NEG_SUFFIX};
use crate::tokenizer::{
    self, emoticon_polarity, EmoticonPolarity, Token, TokenKind, TokenizedMessage,
};

pub fn word_ngrams(fv: &mut FeatureVector, words: &[String], cfg: &FeatureConfig) {
    let max_n = if cfg.unigrams_only {
        1
    } else {
        cfg.max_word_ngram
    };
    for n in 1..=max_n {
        for window in words.windows(n) {
            fv.flag(format!("wng|{}", window.join(" ")));
            if !cfg.unigrams_only && cfg.wildcard_lengths.contains(&n) {
                for k in 1..n - 1 {
                    let mut w: Vec<&str> = window.iter().map(String::as_str).collect();
                    w[k] = "*";
                    fv.flag(format!("wng|{}", w.join(" ")));
                }
            }
        }
    }
}

pub fn char_ngrams(fv: &mut FeatureVector, tokens: &[Token], lengths: &[usize]) {
    for t in tokens {
        if matches!(t.kind, TokenKind::Url | TokenKind::Mention) {
            continue;
        }
        let chars: Vec<char> = t.lower().chars().collect();
        for &n in lengths {
            for w in chars.windows(n) {
                fv.flag(format!("cng|{}", w.iter().collect::<String>()));
            }
        }
    }
}

/// Classifies maximal `!`/`?` runs of length two or more.
fn punctuation_runs(surface: &str) -> Vec<&'static str> {
    let mut out = Vec::new();
    let chars: Vec<char> = surface.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '!' && chars[i] != '?' {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && (chars[i] == '!' || chars[i] == '?') {
            i += 1;
        }
        let run = &chars[start..i];
        if run.len() >= 2 {
            let excl = run.contains(&'!');
            let quest = run.contains(&'?');
            out.push(match (excl, quest) {
                (true, false) => "excl",
                (false, true) => "quest",
                _ => "mixed",
            });
        }
    }
    out
}

fn encodings(fv: &mut FeatureVector, tokens: &[Token]) {
    let caps = tokens.iter().filter(|t| t.flags.all_caps).count();
    fv.set("caps|count", caps as f64);
    let hashtags = tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Hashtag)
        .count();
    fv.set("hash|count", hashtags as f64);
    let elongated = tokens
        .iter()
        .filter(|t| t.is_wordlike() && t.flags.elongated)
        .count();
    fv.set("elong|count", elongated as f64);

    for t in tokens {
        for kind in punctuation_runs(&t.surface) {
            fv.add(format!("punc|{kind}_runs"), 1.0);
        }
    }
    if tokens
        .last()
        .is_some_and(|t| t.surface.contains(['!', '?']))
    {
        fv.flag("punc|last_excl_or_quest");
    }

    for t in tokens {
        match emoticon_polarity(t) {
            EmoticonPolarity::Positive => fv.flag("emo|has_positive"),
            EmoticonPolarity::Negative => fv.flag("emo|has_negative"),
            EmoticonPolarity::None => {}
        }
    }
    match tokens.last().map(emoticon_polarity) {
        Some(EmoticonPolarity::Positive) => fv.flag("emo|last_positive"),
        Some(EmoticonPolarity::Negative) => fv.flag("emo|last_negative"),
        _ => {}
    }
}

/// Scopes a unigram belongs to besides "all tokens".
fn unigram_scopes(t: &Token) -> Vec<String> {
    let mut scopes = vec![String::new()];
    if t.kind == TokenKind::Hashtag {
        scopes.push(":hashtag".into());
    }
    if t.flags.all_caps {
        scopes.push(":caps".into());
    }
    if let Some(tag) = &t.pos_tag {
        scopes.push(format!(":pos={tag}"));
    }
    scopes
}

fn lookup_unigram<'a>(
    lexicon: &'a crate::corpus::Lexicon,
    token: &Token,
) -> Option<&'a std::collections::HashMap<String, f64>> {
    let lower = token.lower();
    lexicon.unigram(&lower).or_else(|| match token.kind {
        TokenKind::Hashtag => lexicon.unigram(lower.trim_start_matches('#')),
        _ => None,
    })
}

/// Groups matched scores by (namespace+scope, affect[_NEG]) in token order,
/// then emits one block per group.
fn lexicon_features(
    fv: &mut FeatureVector,
    tokens: &[Token],
    negated: &[bool],
    res: &Resources,
    cfg: &FeatureConfig,
) {
    let lower: Vec<String> = tokens.iter().map(Token::lower).collect();
    for (li, lex) in res.lexicons.iter().enumerate() {
        if !cfg.lexicon_on(lex) {
            continue;
        }
        let mut groups: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
        let mut push = |ns: String, affect: &str, neg: bool, score: f64| {
            let affect = if neg {
                format!("{affect}{NEG_SUFFIX}")
            } else {
                affect.to_string()
            };
            groups.entry((ns, affect)).or_default().push(score);
        };

        for (i, t) in tokens.iter().enumerate() {
            let Some(scores) = lookup_unigram(lex, t) else {
                continue;
            };
            for scope in unigram_scopes(t) {
                for affect in &lex.affects {
                    if let Some(&s) = scores.get(affect) {
                        push(format!("uni{scope}"), affect, negated[i], s);
                    }
                }
            }
        }
        for i in 0..tokens.len().saturating_sub(1) {
            let Some(scores) = lex.bigram(&lower[i], &lower[i + 1]) else {
                continue;
            };
            for affect in &lex.affects {
                if let Some(&s) = scores.get(affect) {
                    push("bi".into(), affect, negated[i] || negated[i + 1], s);
                }
            }
        }
        if res.lexicon_has_pairs(li) {
            for c in extract_candidates(&lower, &CandidateFilter::unfiltered()) {
                if c.kind != TermKind::Pair {
                    continue;
                }
                let Some(scores) = lex.get(&c.key()) else {
                    continue;
                };
                let neg = negated[c.first..=c.last].iter().any(|&b| b);
                for affect in &lex.affects {
                    if let Some(&s) = scores.get(affect) {
                        push("pair".into(), affect, neg, s);
                    }
                }
            }
        }

        for ((ns, affect), scores) in groups {
            if let Some(block) = LexiconFeatureBlock::from_scores(&scores, LastRule::LastPositive) {
                block.emit(fv, &format!("lex|{}|{ns}", lex.name), &affect);
            }
        }
    }
}

pub fn extract_message_features(
    msg: &TokenizedMessage,
    neg: &NegationAnnotation,
    res: &Resources,
    cfg: &FeatureConfig,
) -> FeatureVector {
    let mut fv = FeatureVector::new();
    let tokens = &msg.tokens;
    let no_negation = NegationAnnotation::default();
    let neg = if cfg.is_on(FeatureGroup::Negation) {
        neg
    } else {
        &no_negation
    };
    let words = apply_negation_suffix(&msg.lowered(), neg);

    if cfg.unigrams_only {
        word_ngrams(&mut fv, &words, cfg);
        return fv;
    }
    if cfg.is_on(FeatureGroup::WordNgrams) {
        word_ngrams(&mut fv, &words, cfg);
    }
    if cfg.is_on(FeatureGroup::CharNgrams) {
        char_ngrams(&mut fv, tokens, &cfg.char_ngram_lengths);
    }
    if cfg.is_on(FeatureGroup::Encodings) {
        encodings(&mut fv, tokens);
    }
    if cfg.is_on(FeatureGroup::Pos) {
        for tag in tokens.iter().filter_map(|t| t.pos_tag.as_deref()) {
            fv.add(format!("pos|{tag}"), 1.0);
        }
    }
    if cfg.is_on(FeatureGroup::Clusters) {
        for id in tokens.iter().filter_map(|t| t.cluster) {
            fv.flag(format!("clu|{id}"));
        }
    }
    if cfg.is_on(FeatureGroup::Negation) {
        fv.set("neg|count", neg.count() as f64);
    }
    if cfg.is_on(FeatureGroup::Lexicons) {
        let mask = neg.mask(tokens.len());
        lexicon_features(&mut fv, tokens, &mask, res, cfg);
    }
    fv
}

/// Tokenizes (or reads pre-tagged tokens), attaches clusters, marks negation
/// and extracts.
#[derive(Debug, Clone)]
pub struct MessageExtractor<'a> {
    pub resources: &'a Resources,
    pub config: FeatureConfig,
}

impl<'a> MessageExtractor<'a> {
    pub fn new(resources: &'a Resources, config: FeatureConfig) -> Self {
        MessageExtractor { resources, config }
    }

    pub fn prepare(&self, message: &LabeledMessage) -> TokenizedMessage {
        let mut msg = match &message.tagged {
            Some(pairs) => tokenizer::from_tagged(&message.text, pairs),
            None => tokenizer::tokenize_message(&message.text),
        };
        msg.attach_clusters(&self.resources.clusters);
        msg
    }

    pub fn extract(&self, message: &LabeledMessage) -> FeatureVector {
        self.extract_with(message, &self.config)
    }
}

impl Extractor for MessageExtractor<'_> {
    type Item = LabeledMessage;

    fn task(&self) -> Task {
        Task::Message
    }

    fn config(&self) -> &FeatureConfig {
        &self.config
    }

    fn label(item: &LabeledMessage) -> Polarity {
        item.label
    }

    fn extract_with(&self, message: &LabeledMessage, config: &FeatureConfig) -> FeatureVector {
        let msg = self.prepare(message);
        let neg = mark_negation(&msg.tokens, &self.resources.negation);
        extract_message_features(&msg, &neg, self.resources, config)
    }
}
