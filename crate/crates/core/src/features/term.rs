//! Term-level feature extraction. Target features live under `tgt|`,
//! context-window features under `ctx|`.

use std::collections::HashMap;

use super::{
    Extractor, FeatureConfig, FeatureGroup, FeatureVector, LastRule, LexiconFeatureBlock,
    Resources, Task,
};
use crate::corpus::{Lexicon, Polarity, TermInstance};
use crate::error::{Error, Result};
use crate::negation::{flip_term_polarity, mark_negation, NegationSite, NEG_SUFFIX};
use crate::tokenizer::{
    self, emoticon_polarity, split_hashtag, EmoticonPolarity, Token, TokenKind,
};

/// A target and up to `window` tokens on either side.
#[derive(Debug, Clone, PartialEq)]
pub struct TermContext {
    pub target_tokens: Vec<Token>,
    pub left_context: Vec<Token>,
    pub right_context: Vec<Token>,
    /// Message token index of each target token (split hashtag parts share
    /// their hashtag's index).
    pub target_origin: Vec<usize>,
    pub left_start: usize,
    pub right_start: usize,
    pub at_begin: bool,
    pub at_end: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Begin,
    End,
    Middle,
}

impl TermContext {
    /// `Begin` wins for whole-message targets; see [`TermContext::at_end`]
    /// for the second flag.
    pub fn position(&self) -> Position {
        if self.at_begin {
            Position::Begin
        } else if self.at_end {
            Position::End
        } else {
            Position::Middle
        }
    }
}

/// Splits multi-word hashtags in the target into word tokens.
pub fn term_context(
    tokens: &[Token],
    span: (usize, usize),
    window: usize,
    wordlist: &std::collections::HashSet<String>,
) -> TermContext {
    let (start, end) = span;
    let mut target_tokens = Vec::new();
    let mut target_origin = Vec::new();
    for (i, t) in tokens.iter().enumerate().take(end + 1).skip(start) {
        let parts = if t.kind == TokenKind::Hashtag {
            split_hashtag(&t.surface, wordlist)
        } else {
            Vec::new()
        };
        if parts.len() > 1 {
            for p in parts {
                target_tokens.push(Token::new(p, TokenKind::Word));
                target_origin.push(i);
            }
        } else {
            target_tokens.push(t.clone());
            target_origin.push(i);
        }
    }
    let left_start = start.saturating_sub(window);
    let right_end = (end + 1 + window).min(tokens.len());
    TermContext {
        target_tokens,
        left_context: tokens[left_start..start].to_vec(),
        right_context: tokens[end + 1..right_end].to_vec(),
        target_origin,
        left_start,
        right_start: end + 1,
        at_begin: start == 0,
        at_end: end + 1 == tokens.len(),
    }
}

fn suffixed(word: String, negated: bool) -> String {
    if negated {
        word + NEG_SUFFIX
    } else {
        word
    }
}

fn affix_features(fv: &mut FeatureVector, prefix: &str, tokens: &[Token]) {
    for t in tokens {
        if matches!(t.kind, TokenKind::Url | TokenKind::Mention) {
            continue;
        }
        let chars: Vec<char> = t.lower().chars().collect();
        for n in [2, 3] {
            if chars.len() >= n {
                let pre: String = chars[..n].iter().collect();
                let suf: String = chars[chars.len() - n..].iter().collect();
                fv.flag(format!("{prefix}|cng|pre{n}|{pre}"));
                fv.flag(format!("{prefix}|cng|suf{n}|{suf}"));
            }
        }
    }
}

fn window_ngrams(fv: &mut FeatureVector, prefix: &str, words: &[String]) {
    for w in words {
        fv.flag(format!("{prefix}|wng|uni|{w}"));
    }
    for pair in words.windows(2) {
        fv.flag(format!("{prefix}|wng|bi|{} {}", pair[0], pair[1]));
    }
}

fn lookup<'a>(lex: &'a Lexicon, t: &Token) -> Option<&'a HashMap<String, f64>> {
    let lower = t.lower();
    lex.unigram(&lower)
        .or_else(|| lex.unigram(lower.trim_start_matches('#')))
}

/// Per-affect aligned scores (0 where unmatched) with a matched mask.
fn aligned_scores(lex: &Lexicon, tokens: &[Token], affect: &str) -> (Vec<f64>, Vec<bool>) {
    tokens
        .iter()
        .map(|t| match lookup(lex, t).and_then(|m| m.get(affect)) {
            Some(&s) => (s, true),
            None => (0.0, false),
        })
        .unzip()
}

fn emit_block(
    fv: &mut FeatureVector,
    scores: &[f64],
    matched: &[bool],
    prefix: &str,
    affect: &str,
) {
    let picked: Vec<f64> = scores
        .iter()
        .zip(matched)
        .filter(|(_, &m)| m)
        .map(|(&s, _)| s)
        .collect();
    if let Some(block) = LexiconFeatureBlock::from_scores(&picked, LastRule::LastNonZero) {
        block.emit(fv, prefix, affect);
    }
}

fn target_lexicons(
    fv: &mut FeatureVector,
    ctx: &TermContext,
    site: Option<NegationSite>,
    res: &Resources,
    cfg: &FeatureConfig,
) {
    for lex in res.lexicons.iter().filter(|l| cfg.lexicon_on(l)) {
        let prefix = format!("tgt|lex|{}", lex.name);
        for affect in &lex.affects {
            let (mut scores, matched) = aligned_scores(lex, &ctx.target_tokens, affect);
            if let Some(site) = site {
                scores = flip_term_polarity(&scores, site);
            }
            emit_block(fv, &scores, &matched, &format!("{prefix}|uni"), affect);
        }
        // bigrams flip with their first token
        let lower: Vec<String> = ctx.target_tokens.iter().map(Token::lower).collect();
        let mut bi: HashMap<&str, (Vec<f64>, Vec<bool>)> = HashMap::new();
        for (i, pair) in lower.windows(2).enumerate() {
            let Some(m) = lex.bigram(&pair[0], &pair[1]) else {
                continue;
            };
            let flip = match site {
                Some(NegationSite::BeforeTarget) => true,
                Some(NegationSite::At(p)) => i > p,
                None => false,
            };
            for affect in &lex.affects {
                if let Some(&s) = m.get(affect) {
                    let e = bi.entry(affect.as_str()).or_default();
                    e.0.push(if flip { -s } else { s });
                    e.1.push(true);
                }
            }
        }
        for affect in &lex.affects {
            if let Some((s, m)) = bi.get(affect.as_str()) {
                emit_block(fv, s, m, &format!("{prefix}|bi"), affect);
            }
        }
    }
}

fn context_lexicons(
    fv: &mut FeatureVector,
    window: &[(Token, bool)],
    res: &Resources,
    cfg: &FeatureConfig,
) {
    for lex in res.lexicons.iter().filter(|l| cfg.lexicon_on(l)) {
        let prefix = format!("ctx|lex|{}|uni", lex.name);
        for affect in &lex.affects {
            for neg in [false, true] {
                let picked: Vec<f64> = window
                    .iter()
                    .filter(|(_, n)| *n == neg)
                    .filter_map(|(t, _)| lookup(lex, t).and_then(|m| m.get(affect)).copied())
                    .collect();
                if let Some(block) =
                    LexiconFeatureBlock::from_scores(&picked, LastRule::LastNonZero)
                {
                    let name = if neg {
                        format!("{affect}{NEG_SUFFIX}")
                    } else {
                        affect.clone()
                    };
                    block.emit(fv, &prefix, &name);
                }
            }
        }
    }
}

fn negation_site(
    tokens: &[Token],
    span: (usize, usize),
    ctx: &TermContext,
    res: &Resources,
) -> Option<NegationSite> {
    if span.0 > 0 && res.negation.is_negation(&tokens[span.0 - 1].surface) {
        return Some(NegationSite::BeforeTarget);
    }
    ctx.target_tokens
        .iter()
        .position(|t| res.negation.is_negation(&t.surface))
        .map(NegationSite::At)
}

pub fn extract_term_features(
    inst: &TermInstance,
    res: &Resources,
    cfg: &FeatureConfig,
) -> FeatureVector {
    let msg = tokenizer::tokenize_message(&inst.text);
    let tokens = &msg.tokens;
    let ctx = term_context(tokens, inst.span, cfg.context_window, &res.wordlist);
    let negation_on = cfg.is_on(FeatureGroup::Negation);
    let mask = if negation_on {
        mark_negation(tokens, &res.negation).mask(tokens.len())
    } else {
        vec![false; tokens.len()]
    };
    let mut fv = FeatureVector::new();

    let target_words: Vec<String> = ctx
        .target_tokens
        .iter()
        .zip(&ctx.target_origin)
        .map(|(t, &i)| suffixed(t.lower(), mask[i]))
        .collect();

    if cfg.unigrams_only {
        for w in &target_words {
            fv.flag(format!("tgt|wng|uni|{w}"));
        }
        return fv;
    }

    if cfg.is_on(FeatureGroup::Target) {
        target_features(
            &mut fv,
            inst,
            tokens,
            &ctx,
            &target_words,
            negation_on,
            res,
            cfg,
        );
    }

    if cfg.is_on(FeatureGroup::Context) {
        let left: Vec<(Token, bool)> = ctx
            .left_context
            .iter()
            .cloned()
            .zip(mask[ctx.left_start..inst.span.0].iter().copied())
            .collect();
        let right: Vec<(Token, bool)> = ctx
            .right_context
            .iter()
            .cloned()
            .zip(
                mask[ctx.right_start..ctx.right_start + ctx.right_context.len()]
                    .iter()
                    .copied(),
            )
            .collect();
        if cfg.is_on(FeatureGroup::WordNgrams) {
            for side in [&left, &right] {
                let words: Vec<String> =
                    side.iter().map(|(t, n)| suffixed(t.lower(), *n)).collect();
                window_ngrams(&mut fv, "ctx", &words);
            }
        }
        if cfg.is_on(FeatureGroup::CharNgrams) {
            affix_features(&mut fv, "ctx", &ctx.left_context);
            affix_features(&mut fv, "ctx", &ctx.right_context);
        }
        if cfg.is_on(FeatureGroup::Lexicons) {
            let window: Vec<(Token, bool)> = left.into_iter().chain(right).collect();
            context_lexicons(&mut fv, &window, res, cfg);
        }
    }
    fv
}

#[allow(clippy::too_many_arguments)]
fn target_features(
    fv: &mut FeatureVector,
    inst: &TermInstance,
    tokens: &[Token],
    ctx: &TermContext,
    target_words: &[String],
    negation_on: bool,
    res: &Resources,
    cfg: &FeatureConfig,
) {
    let target = &ctx.target_tokens;
    if cfg.is_on(FeatureGroup::WordNgrams) {
        window_ngrams(fv, "tgt", target_words);
        fv.flag(format!("tgt|wng|full|{}", target_words.join(" ")));
        if let (Some(first), Some(last)) = (target_words.first(), target_words.last()) {
            fv.flag(format!("tgt|wng|first|{first}"));
            fv.flag(format!("tgt|wng|last|{last}"));
        }
        if target_words.len() >= 2 {
            let n = target_words.len();
            fv.flag(format!(
                "tgt|wng|first_bi|{} {}",
                target_words[0], target_words[1]
            ));
            fv.flag(format!(
                "tgt|wng|last_bi|{} {}",
                target_words[n - 2],
                target_words[n - 1]
            ));
        }
    }
    if cfg.is_on(FeatureGroup::CharNgrams) {
        affix_features(fv, "tgt", target);
    }

    if cfg.is_on(FeatureGroup::Encodings) {
        if target.iter().any(|t| t.is_wordlike() && t.flags.elongated) {
            fv.flag("tgt|elong|any");
        }
        let emoticons: Vec<EmoticonPolarity> = target
            .iter()
            .filter(|t| t.kind == TokenKind::Emoticon)
            .map(emoticon_polarity)
            .collect();
        fv.set("tgt|emo|count", emoticons.len() as f64);
        let count = |p| emoticons.iter().filter(|&&e| e == p).count() as f64;
        fv.set("tgt|emo|positive", count(EmoticonPolarity::Positive));
        fv.set("tgt|emo|negative", count(EmoticonPolarity::Negative));
        for t in target.iter().filter(|t| t.kind == TokenKind::Punctuation) {
            if t.surface.chars().count() >= 2 && t.surface.chars().all(|c| c == '!' || c == '?') {
                fv.flag(format!("tgt|punc|{}", t.surface));
            }
        }
        let words: Vec<&Token> = target
            .iter()
            .filter(|t| t.kind == TokenKind::Word)
            .collect();
        if !words.is_empty() {
            if words.iter().all(|t| t.flags.initial_cap) {
                fv.flag("tgt|case|initial-caps-all");
            }
            if words.iter().all(|t| t.flags.all_caps) {
                fv.flag("tgt|case|all-caps");
            }
        }
    }

    if cfg.is_on(FeatureGroup::Stopwords)
        && !target.is_empty()
        && target.iter().all(|t| res.stopwords.contains(&t.lower()))
    {
        fv.flag("tgt|stop|only");
        let bucket = match target.len() {
            1 => "n1",
            2 => "n2",
            3 => "n3",
            _ => "nmore",
        };
        fv.flag(format!("tgt|stop|{bucket}"));
    }

    let lengths: Vec<usize> = target.iter().map(|t| t.surface.chars().count()).collect();
    fv.set("tgt|len|words", target.len() as f64);
    if !lengths.is_empty() {
        fv.set(
            "tgt|len|avg_chars",
            lengths.iter().sum::<usize>() as f64 / lengths.len() as f64,
        );
    }
    if lengths.iter().any(|&l| l >= cfg.long_word_chars) {
        fv.flag("tgt|len|long");
    }

    if ctx.at_begin {
        fv.flag("tgt|pos|begin");
    }
    if ctx.at_end {
        fv.flag("tgt|pos|end");
    }
    if !ctx.at_begin && !ctx.at_end {
        fv.flag("tgt|pos|middle");
    }

    if target.iter().any(|t| t.kind == TokenKind::Mention) {
        fv.flag("tgt|other|user");
    }
    if target.iter().any(|t| t.kind == TokenKind::Url) {
        fv.flag("tgt|other|url");
    }

    let site = if negation_on {
        negation_site(tokens, inst.span, ctx, res)
    } else {
        None
    };
    if site.is_some() {
        fv.flag("tgt|neg|present");
    }
    if cfg.is_on(FeatureGroup::Lexicons) {
        target_lexicons(fv, ctx, site, res, cfg);
    }
}

/// Drops every feature in the `tgt` or `ctx` namespace.
pub fn ablate_namespace(vector: &FeatureVector, namespace: &str) -> Result<FeatureVector> {
    if namespace != "tgt" && namespace != "ctx" {
        return Err(Error::UnknownNamespace(namespace.to_string()));
    }
    let prefix = format!("{namespace}|");
    let mut out = vector.clone();
    out.retain(|name, _| !name.starts_with(&prefix));
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TermExtractor<'a> {
    pub resources: &'a Resources,
    pub config: FeatureConfig,
}

impl<'a> TermExtractor<'a> {
    pub fn new(resources: &'a Resources, config: FeatureConfig) -> Self {
        TermExtractor { resources, config }
    }

    pub fn extract(&self, inst: &TermInstance) -> FeatureVector {
        extract_term_features(inst, self.resources, &self.config)
    }
}

impl Extractor for TermExtractor<'_> {
    type Item = TermInstance;

    fn task(&self) -> Task {
        Task::Term
    }

    fn config(&self) -> &FeatureConfig {
        &self.config
    }

    fn label(item: &TermInstance) -> Polarity {
        item.label
    }

    fn extract_with(&self, inst: &TermInstance, config: &FeatureConfig) -> FeatureVector {
        extract_term_features(inst, self.resources, config)
    }
}
