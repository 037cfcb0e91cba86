//! Tweet normalization and tokenization.
//!
//! The scanner tries, at every non-space position and in this order: URL,
//! emoticon, hashtag, mention, number, word, and finally a run of
//! punctuation. Emoticons follow the classic eyes/nose/mouth grammar in both
//! orientations (`:-)`, `(-:`).

use std::collections::HashSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::corpus::parse_word_list;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Hashtag,
    Mention,
    Url,
    Emoticon,
    Punctuation,
    Number,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TokenFlags {
    pub all_caps: bool,
    pub elongated: bool,
    pub initial_cap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
    pub flags: TokenFlags,
    pub pos_tag: Option<String>,
    pub cluster: Option<u16>,
}

impl Token {
    pub fn new(surface: impl Into<String>, kind: TokenKind) -> Token {
        let surface = surface.into();
        let flags = compute_flags(&surface, kind);
        Token {
            surface,
            kind,
            flags,
            pos_tag: None,
            cluster: None,
        }
    }

    /// Builds a token from a bare surface, classifying it with the scanner.
    pub fn classify(surface: &str) -> Token {
        let spans = scan(surface);
        let kind = match spans.as_slice() {
            [(0, end, kind)] if *end == surface.len() => *kind,
            _ if surface.chars().any(is_word_char) => TokenKind::Word,
            _ => TokenKind::Other,
        };
        Token::new(surface, kind)
    }

    pub fn lower(&self) -> String {
        self.surface.to_lowercase()
    }

    pub fn is_wordlike(&self) -> bool {
        matches!(self.kind, TokenKind::Word | TokenKind::Hashtag)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TokenizedMessage {
    pub tokens: Vec<Token>,
    pub source_text: String,
}

impl TokenizedMessage {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn lowered(&self) -> Vec<String> {
        self.tokens.iter().map(Token::lower).collect()
    }

    /// Attaches cluster ids by lowercased surface.
    pub fn attach_clusters(&mut self, clusters: &crate::corpus::ClusterMap) {
        for t in &mut self.tokens {
            t.cluster = clusters
                .get(&t.lower())
                .or_else(|| clusters.get(&t.surface));
        }
    }
}

fn compute_flags(surface: &str, kind: TokenKind) -> TokenFlags {
    let letters: Vec<char> = surface.chars().filter(|c| c.is_alphabetic()).collect();
    let all_caps = matches!(kind, TokenKind::Word | TokenKind::Hashtag)
        && letters.len() >= 2
        && !letters.iter().any(|c| c.is_lowercase());
    let mut chars = surface.chars();
    let initial_cap = kind == TokenKind::Word
        && chars.next().is_some_and(char::is_uppercase)
        && surface.chars().count() >= 2
        && chars.all(char::is_lowercase);
    TokenFlags {
        all_caps,
        elongated: is_elongated(surface),
        initial_cap,
    }
}

/// True iff some character occurs more than two times in a row.
pub fn is_elongated(s: &str) -> bool {
    let mut prev = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
            if run > 2 {
                return true;
            }
        } else {
            prev = Some(c);
            run = 1;
        }
    }
    false
}

pub const URL_PLACEHOLDER: &str = "http://someurl";
pub const USER_PLACEHOLDER: &str = "@someuser";

static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:https?://|www\.)\S+").unwrap());
static MENTION_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(^|[^\w@])@\w+").unwrap());

/// Replaces URLs with `http://someurl` and user mentions with `@someuser`.
pub fn normalize(text: &str) -> String {
    let urls = URL_RE.replace_all(text, URL_PLACEHOLDER);
    MENTION_RE
        .replace_all(&urls, format!("${{1}}{USER_PLACEHOLDER}").as_str())
        .into_owned()
}

static ANCHORED_URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?i:https?://|www\.)\S+").unwrap());
static EMOTICON_FWD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"^[<>]?[:;=8][\-o*']?[)(\]\[dDpP/\\:}{@|]"#).unwrap());
static EMOTICON_REV: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"^[)(\]\[dDpP/\\:}{@|][\-o*']?[:;=8][<>]?"#).unwrap());
static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[0-9]+(?:[.,:][0-9]+)*").unwrap());
static WORD: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^[\p{L}\p{N}_]+(?:['’][\p{L}\p{N}_]+)*").unwrap());
static TAG_BODY: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[\p{L}\p{N}_]+").unwrap());

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Length of the emoticon pattern at the start of `rest`, ignoring what follows.
fn emoticon_pattern(rest: &str) -> Option<usize> {
    if let Some(m) = EMOTICON_FWD.find(rest) {
        return Some(m.end());
    }
    let m = EMOTICON_REV.find(rest)?;
    // reject letter-mouth forms like "do:" where the nose is a letter
    let mut chars = m.as_str().chars();
    let first = chars.next()?;
    let second = chars.next()?;
    if first.is_alphabetic() && second.is_alphabetic() {
        return None;
    }
    Some(m.end())
}

/// Emoticon accepted only when not glued to a following word character.
fn accepted_emoticon(rest: &str) -> Option<usize> {
    let len = emoticon_pattern(rest)?;
    match rest[len..].chars().next() {
        Some(c) if c.is_alphanumeric() => None,
        _ => Some(len),
    }
}

fn prefixed(rest: &str, sigil: char) -> Option<usize> {
    let body = rest.strip_prefix(sigil)?;
    TAG_BODY.find(body).map(|m| sigil.len_utf8() + m.end())
}

fn starts_special(rest: &str) -> bool {
    ANCHORED_URL.is_match(rest)
        || emoticon_pattern(rest).is_some()
        || prefixed(rest, '#').is_some()
        || prefixed(rest, '@').is_some()
}

fn scan(text: &str) -> Vec<(usize, usize, TokenKind)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let (len, kind) = if let Some(m) = ANCHORED_URL.find(rest) {
            (m.end(), TokenKind::Url)
        } else if let Some(len) = accepted_emoticon(rest) {
            (len, TokenKind::Emoticon)
        } else if let Some(len) = prefixed(rest, '#') {
            (len, TokenKind::Hashtag)
        } else if let Some(len) = prefixed(rest, '@') {
            (len, TokenKind::Mention)
        } else if let Some(m) = NUMBER
            .find(rest)
            .filter(|m| !rest[m.end()..].starts_with(is_word_char))
        {
            (m.end(), TokenKind::Number)
        } else if let Some(m) = WORD.find(rest) {
            // a digit run cut short by a separator, as in "3" of "3.5a"
            let kind = if m.as_str().bytes().all(|b| b.is_ascii_digit()) {
                TokenKind::Number
            } else {
                TokenKind::Word
            };
            (m.end(), kind)
        } else {
            let len = punctuation_run(rest, emoticon_pattern(rest).is_some());
            let run = &rest[..len];
            let kind = if run.chars().all(|c| c.is_ascii_punctuation()) {
                TokenKind::Punctuation
            } else {
                TokenKind::Other
            };
            (len, kind)
        };
        out.push((i, i + len, kind));
        i += len;
    }
    out
}

/// A punctuation run stops before whitespace, word characters, or anything
/// that could start a URL, emoticon, hashtag or mention. A rejected
/// emoticon at the run start yields a single character.
fn punctuation_run(rest: &str, rejected_emoticon: bool) -> usize {
    let mut iter = rest.char_indices();
    let (_, first) = iter.next().unwrap();
    if rejected_emoticon {
        return first.len_utf8();
    }
    for (j, c) in iter {
        if c.is_whitespace() || is_word_char(c) || starts_special(&rest[j..]) {
            return j;
        }
    }
    rest.len()
}

/// Tokenizes already-normalized text.
pub fn tokenize(text: &str) -> TokenizedMessage {
    let tokens = scan(text)
        .into_iter()
        .map(|(s, e, kind)| Token::new(&text[s..e], kind))
        .collect();
    TokenizedMessage {
        tokens,
        source_text: text.to_string(),
    }
}

/// `tokenize(normalize(text))`, the pipeline every component shares.
pub fn tokenize_message(text: &str) -> TokenizedMessage {
    tokenize(&normalize(text))
}

/// Builds a message from pre-tagged `(surface, tag)` pairs.
pub fn from_tagged(source_text: &str, pairs: &[(String, String)]) -> TokenizedMessage {
    let tokens = pairs
        .iter()
        .map(|(surface, tag)| {
            let mut t = Token::classify(surface);
            t.pos_tag = Some(tag.clone());
            t
        })
        .collect();
    TokenizedMessage {
        tokens,
        source_text: source_text.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmoticonPolarity {
    Positive,
    Negative,
    None,
}

/// Polarity by mouth character. Reversed forms (`(:`) read the mouth on the
/// left, mirrored.
pub fn emoticon_polarity_of(surface: &str) -> EmoticonPolarity {
    let full = |re: &Regex| re.find(surface).is_some_and(|m| m.end() == surface.len());
    if full(&EMOTICON_FWD) {
        match surface.chars().last() {
            Some(')' | ']' | '}' | 'd' | 'D') => EmoticonPolarity::Positive,
            Some('(' | '[' | '{' | '/' | '\\' | '|') => EmoticonPolarity::Negative,
            _ => EmoticonPolarity::None,
        }
    } else if full(&EMOTICON_REV) {
        match surface.chars().next() {
            Some('(' | '[' | '{') => EmoticonPolarity::Positive,
            Some(')' | ']' | '}' | 'D' | '/' | '\\' | '|') => EmoticonPolarity::Negative,
            _ => EmoticonPolarity::None,
        }
    } else {
        EmoticonPolarity::None
    }
}

pub fn emoticon_polarity(token: &Token) -> EmoticonPolarity {
    if token.kind != TokenKind::Emoticon {
        return EmoticonPolarity::None;
    }
    emoticon_polarity_of(&token.surface)
}

const MAX_WORD_CHARS: usize = 24;

/// Greedy longest-prefix segmentation of a hashtag. Characters that start
/// no known word accumulate into a residue token.
pub fn split_hashtag(tag: &str, wordlist: &HashSet<String>) -> Vec<String> {
    let body = tag.strip_prefix('#').unwrap_or(tag);
    let bounds: Vec<usize> = body
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(body.len()))
        .collect();
    let mut out = Vec::new();
    let mut residue_start: Option<usize> = None;
    let mut k = 0;
    while k + 1 < bounds.len() {
        let start = bounds[k];
        let longest = (k + 1..bounds.len().min(k + 1 + MAX_WORD_CHARS))
            .rev()
            .find(|&e| wordlist.contains(&body[start..bounds[e]].to_lowercase()));
        match longest {
            Some(e) => {
                if let Some(r) = residue_start.take() {
                    out.push(body[r..start].to_string());
                }
                out.push(body[start..bounds[e]].to_string());
                k = e;
            }
            None => {
                residue_start.get_or_insert(start);
                k += 1;
            }
        }
    }
    if let Some(r) = residue_start {
        out.push(body[r..].to_string());
    }
    out
}

pub static DEFAULT_WORDLIST: LazyLock<HashSet<String>> =
    LazyLock::new(|| parse_word_list(include_str!("../data/wordlist.txt")));
