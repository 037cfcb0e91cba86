//! Corpus, lexicon and cluster-map file formats.
//!
//! Every format is UTF-8, tab-separated, one record per line. Lines starting
//! with `#` are comments unless they parse as a complete data record (so
//! hashtag terms such as `#good` survive in lexicon and cluster files).

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tokenizer;

/// Sentiment class of a message or term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

impl Polarity {
    /// Fixed class order used by models and confusion matrices.
    pub const ALL: [Polarity; 3] = [Polarity::Negative, Polarity::Neutral, Polarity::Positive];

    pub fn index(self) -> usize {
        match self {
            Polarity::Negative => 0,
            Polarity::Neutral => 1,
            Polarity::Positive => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
            Polarity::Positive => "positive",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            "neutral" => Ok(Polarity::Neutral),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMessage {
    pub id: String,
    pub text: String,
    pub label: Polarity,
    /// Optional pre-tagged tokens (`surface`, `tag`) from a fourth column.
    pub tagged: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermInstance {
    pub id: String,
    pub text: String,
    /// Inclusive token span of the target under [`tokenizer::tokenize_message`].
    pub span: (usize, usize),
    pub label: Polarity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// `id<TAB>label<TAB>text`
    Tsv,
    /// `id<TAB>label<TAB>text<TAB>surface/TAG surface/TAG ...`
    Tagged,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Iterates over `(line_number, line)` skipping blank lines; line numbers
/// are 1-based.
fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = std::io::Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| l.map(|l| (i + 1, l.trim_end_matches('\r').to_string())))
        .filter(|r| {
            r.as_ref()
                .map(|(_, l)| !l.trim().is_empty())
                .unwrap_or(true)
        })
}

fn read_err(e: std::io::Error) -> Error {
    Error::io("<reader>", e)
}

/// Reverses the `\t`, `\n` and `\\` escapes permitted in the text field.
pub fn unescape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

pub fn escape_text(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('\t', "\\t")
        .replace('\n', "\\n")
}

fn parse_label(s: &str, line: usize) -> Result<Polarity> {
    s.parse().map_err(|_| Error::UnknownLabel {
        label: s.to_string(),
        line,
    })
}

fn parse_tagged(column: &str, line: usize) -> Result<Vec<(String, String)>> {
    column
        .split_whitespace()
        .map(|pair| {
            pair.rsplit_once('/')
                .filter(|(s, t)| !s.is_empty() && !t.is_empty())
                .map(|(s, t)| (s.to_string(), t.to_string()))
                .ok_or_else(|| Error::parse(line, format!("bad tagged token '{pair}'")))
        })
        .collect()
}

pub fn parse_message_corpus<R: BufRead>(
    reader: R,
    format: CorpusFormat,
) -> Result<Vec<LabeledMessage>> {
    let mut out = Vec::new();
    for item in data_lines(reader) {
        let (line, raw) = item.map_err(read_err)?;
        if raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = match format {
            CorpusFormat::Tsv => raw.splitn(3, '\t').collect(),
            CorpusFormat::Tagged => raw.splitn(4, '\t').collect(),
        };
        let want = if format == CorpusFormat::Tsv { 3 } else { 4 };
        if fields.len() != want {
            return Err(Error::parse(
                line,
                format!("expected {want} tab-separated fields"),
            ));
        }
        let label = parse_label(fields[1], line)?;
        let text = unescape_text(fields[2]);
        if text.trim().is_empty() {
            return Err(Error::parse(line, "empty message text"));
        }
        let tagged = match format {
            CorpusFormat::Tsv => None,
            CorpusFormat::Tagged => Some(parse_tagged(fields[3], line)?),
        };
        out.push(LabeledMessage {
            id: fields[0].to_string(),
            text,
            label,
            tagged,
        });
    }
    Ok(out)
}

pub fn load_message_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
) -> Result<Vec<LabeledMessage>> {
    parse_message_corpus(open(path.as_ref())?, format)
}

pub fn parse_term_corpus<R: BufRead>(reader: R) -> Result<Vec<TermInstance>> {
    let mut out = Vec::new();
    for item in data_lines(reader) {
        let (line, raw) = item.map_err(read_err)?;
        if raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.splitn(5, '\t').collect();
        if fields.len() != 5 {
            return Err(Error::parse(line, "expected 5 tab-separated fields"));
        }
        let index = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("bad token index '{s}'")))
        };
        let (start, end) = (index(fields[1])?, index(fields[2])?);
        let label = parse_label(fields[3], line)?;
        let text = unescape_text(fields[4]);
        let id = fields[0].to_string();
        let tokens = tokenizer::tokenize_message(&text).tokens.len();
        if start > end || end >= tokens {
            return Err(Error::SpanOutOfRange {
                id,
                start,
                end,
                tokens,
            });
        }
        out.push(TermInstance {
            id,
            text,
            span: (start, end),
            label,
        });
    }
    Ok(out)
}

pub fn load_term_corpus(path: impl AsRef<Path>) -> Result<Vec<TermInstance>> {
    parse_term_corpus(open(path.as_ref())?)
}

/// Where a lexicon came from; drives the manual/automatic ablation groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LexiconOrigin {
    #[default]
    Manual,
    Induced,
}

/// Term → affect → score.
///
/// Induced lexicons namespace their terms as `uni:`, `bi:` and `pair:`;
/// manual lexicons usually store bare unigrams, which [`Lexicon::unigram`]
/// resolves as well.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lexicon {
    pub name: String,
    pub origin: LexiconOrigin,
    pub affects: Vec<String>,
    pub entries: HashMap<String, HashMap<String, f64>>,
}

impl Lexicon {
    pub fn new(name: impl Into<String>, origin: LexiconOrigin) -> Self {
        Lexicon {
            name: name.into(),
            origin,
            ..Default::default()
        }
    }

    pub fn insert(&mut self, term: impl Into<String>, affect: &str, score: f64) -> Option<f64> {
        if !self.affects.iter().any(|a| a == affect) {
            self.affects.push(affect.to_string());
        }
        self.entries
            .entry(term.into())
            .or_default()
            .insert(affect.to_string(), score)
    }

    pub fn get(&self, term: &str) -> Option<&HashMap<String, f64>> {
        self.entries.get(term)
    }

    pub fn score(&self, term: &str, affect: &str) -> Option<f64> {
        self.entries.get(term).and_then(|m| m.get(affect)).copied()
    }

    pub fn unigram(&self, word: &str) -> Option<&HashMap<String, f64>> {
        self.entries
            .get(&format!("uni:{word}"))
            .or_else(|| self.entries.get(word))
    }

    pub fn bigram(&self, first: &str, second: &str) -> Option<&HashMap<String, f64>> {
        self.entries.get(&format!("bi:{first} {second}"))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `term<TAB>affect<TAB>score` lines. Returns the lexicon plus one
    /// warning per duplicated `(term, affect)` pair (the last value wins).
    pub fn from_reader<R: BufRead>(
        reader: R,
        default_name: &str,
    ) -> Result<(Lexicon, Vec<String>)> {
        let mut lex = Lexicon::new(default_name, LexiconOrigin::Manual);
        let mut warnings = Vec::new();
        for item in data_lines(reader) {
            let (line, raw) = item.map_err(read_err)?;
            let fields: Vec<&str> = raw.split('\t').collect();
            let numeric = fields.len() == 3 && fields[2].trim().parse::<f64>().is_ok();
            if raw.starts_with('#') && !numeric {
                match fields.as_slice() {
                    ["#lexicon", name] => lex.name = name.to_string(),
                    ["#origin", "induced"] => lex.origin = LexiconOrigin::Induced,
                    ["#origin", "manual"] => lex.origin = LexiconOrigin::Manual,
                    ["#affects", list] => {
                        for a in list.split(',').filter(|a| !a.is_empty()) {
                            if !lex.affects.iter().any(|x| x == a) {
                                lex.affects.push(a.to_string());
                            }
                        }
                    }
                    _ => {}
                }
                continue;
            }
            if fields.len() != 3 {
                return Err(Error::parse(line, "expected term<TAB>affect<TAB>score"));
            }
            let score: f64 = fields[2]
                .trim()
                .parse()
                .map_err(|_| Error::parse(line, format!("non-numeric score '{}'", fields[2])))?;
            if !score.is_finite() {
                return Err(Error::parse(
                    line,
                    format!("non-finite score '{}'", fields[2]),
                ));
            }
            if lex.insert(fields[0], fields[1], score).is_some() {
                warnings.push(format!(
                    "duplicate entry ({}, {}) at line {line}; last value wins",
                    fields[0], fields[1]
                ));
            }
        }
        Ok((lex, warnings))
    }

    pub fn to_writer<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#lexicon\t{}", self.name)?;
        let origin = match self.origin {
            LexiconOrigin::Manual => "manual",
            LexiconOrigin::Induced => "induced",
        };
        writeln!(w, "#origin\t{origin}")?;
        writeln!(w, "#affects\t{}", self.affects.join(","))?;
        let mut terms: Vec<&String> = self.entries.keys().collect();
        terms.sort();
        for term in terms {
            let scores = &self.entries[term];
            for affect in &self.affects {
                if let Some(s) = scores.get(affect) {
                    writeln!(w, "{term}\t{affect}\t{s:.6}")?;
                }
            }
        }
        w.flush()
    }
}

/// Loads a `term<TAB>affect<TAB>score` lexicon; duplicate warnings go to the log.
pub fn load_polarity_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".to_string());
    let (lex, warnings) = Lexicon::from_reader(open(path)?, &stem)?;
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(lex)
}

pub fn write_lexicon(lexicon: &Lexicon, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    lexicon
        .to_writer(BufWriter::new(file))
        .map_err(|e| Error::io(path, e))
}

/// Token → Brown-style cluster id in `[0, 999]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClusterMap {
    pub entries: HashMap<String, u16>,
}

impl ClusterMap {
    pub const MAX_ID: u16 = 999;

    pub fn get(&self, token: &str) -> Option<u16> {
        self.entries.get(token).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_reader<R: BufRead>(reader: R) -> Result<ClusterMap> {
        let mut map = ClusterMap::default();
        for item in data_lines(reader) {
            let (line, raw) = item.map_err(read_err)?;
            let fields: Vec<&str> = raw.split('\t').collect();
            let parsed = if fields.len() == 2 {
                fields[1].trim().parse::<i64>().ok()
            } else {
                None
            };
            if raw.starts_with('#') && parsed.is_none() {
                continue;
            }
            let id = parsed.ok_or_else(|| Error::parse(line, "expected token<TAB>cluster-id"))?;
            if !(0..=ClusterMap::MAX_ID as i64).contains(&id) {
                return Err(Error::ClusterOutOfRange {
                    token: fields[0].to_string(),
                    id,
                    line,
                });
            }
            map.entries.insert(fields[0].to_string(), id as u16);
        }
        Ok(map)
    }
}

pub fn load_cluster_map(path: impl AsRef<Path>) -> Result<ClusterMap> {
    ClusterMap::from_reader(open(path.as_ref())?)
}

/// One lowercase word per line; blank and `#` lines ignored.
pub fn parse_word_list(text: &str) -> std::collections::HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn load_word_list(path: impl AsRef<Path>) -> Result<std::collections::HashSet<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_message_line() {
        let msgs =
            parse_message_corpus("t1\tpositive\tI love this\n".as_bytes(), CorpusFormat::Tsv)
                .unwrap();
        assert_eq!(msgs.len(), 1);
        assert_eq!(msgs[0].id, "t1");
        assert_eq!(msgs[0].label, Polarity::Positive);
        assert_eq!(msgs[0].text, "I love this");
    }

    #[test]
    fn empty_corpus_is_empty() {
        assert!(parse_message_corpus("".as_bytes(), CorpusFormat::Tsv)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unknown_label_names_line() {
        let err =
            parse_message_corpus("t2\thappy\tyay\n".as_bytes(), CorpusFormat::Tsv).unwrap_err();
        assert_eq!(err.to_string(), "unknown label 'happy' at line 1");
    }

    #[test]
    fn malformed_line_names_line_number() {
        let err = parse_message_corpus(
            "# header\nt1\tpositive\tok\nbroken\n".as_bytes(),
            CorpusFormat::Tsv,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn escaped_tabs_in_text() {
        let msgs =
            parse_message_corpus("a\tneutral\tx\\ty\n".as_bytes(), CorpusFormat::Tsv).unwrap();
        assert_eq!(msgs[0].text, "x\ty");
        assert_eq!(escape_text(&msgs[0].text), "x\\ty");
    }

    #[test]
    fn tagged_column() {
        let msgs = parse_message_corpus(
            "a\tpositive\tso good\tso/R good/A\n".as_bytes(),
            CorpusFormat::Tagged,
        )
        .unwrap();
        assert_eq!(
            msgs[0].tagged.as_deref().unwrap(),
            &[("so".into(), "R".into()), ("good".into(), "A".into())]
        );
    }

    #[test]
    fn term_corpus_span_rules() {
        let ok = parse_term_corpus("t1\t0\t1\tnegative\tnot good at all\n".as_bytes()).unwrap();
        assert_eq!(ok[0].span, (0, 1));
        let toks = tokenizer::tokenize_message(&ok[0].text);
        let target: Vec<&str> = toks.tokens[0..=1]
            .iter()
            .map(|t| t.surface.as_str())
            .collect();
        assert_eq!(target, ["not", "good"]);

        let err = parse_term_corpus("t2\t2\t4\tpositive\tnot good at\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::SpanOutOfRange { ref id, .. } if id == "t2"));
        let err = parse_term_corpus("t3\t1\t0\tpositive\tnot good at\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::SpanOutOfRange { .. }));
    }

    #[test]
    fn lexicon_lines_and_duplicates() {
        let text = "good\tpositive\t1.0\nexcellent\tpositive\t2.3\nexcellent\tpositive\t2.3\nterrible\tnegative\t-1.0\n";
        let (lex, warnings) = Lexicon::from_reader(text.as_bytes(), "mpqa").unwrap();
        assert_eq!(lex.score("good", "positive"), Some(1.0));
        assert_eq!(lex.score("terrible", "negative"), Some(-1.0));
        assert_eq!(lex.len(), 3);
        assert_eq!(warnings.len(), 1);
        assert_eq!(lex.affects, ["positive", "negative"]);
    }

    #[test]
    fn hashtag_terms_are_not_comments() {
        let (lex, _) =
            Lexicon::from_reader("#good\tpositive\t1.5\n# just a note\n".as_bytes(), "x").unwrap();
        assert_eq!(lex.score("#good", "positive"), Some(1.5));
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn non_numeric_score_is_error() {
        assert!(Lexicon::from_reader("good\tpositive\thigh\n".as_bytes(), "x").is_err());
    }

    #[test]
    fn write_formats_and_sorts() {
        let mut lex = Lexicon::new("l", LexiconOrigin::Manual);
        let mut buf = Vec::new();
        lex.to_writer(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.lines().all(|l| l.starts_with('#')));

        lex.insert("zeta", "positive", 0.1234567);
        lex.insert("alpha", "positive", -2.0);
        let mut buf = Vec::new();
        lex.to_writer(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let data: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(
            data,
            ["alpha\tpositive\t-2.000000", "zeta\tpositive\t0.123457"]
        );
    }

    #[test]
    fn header_round_trip_keeps_name_origin_affects() {
        let mut lex = Lexicon::new("s140", LexiconOrigin::Induced);
        lex.affects = vec!["positive".into(), "negative".into()];
        let mut buf = Vec::new();
        lex.to_writer(&mut buf).unwrap();
        let (back, _) = Lexicon::from_reader(buf.as_slice(), "other").unwrap();
        assert_eq!(back, lex);
    }

    #[test]
    fn cluster_map_rules() {
        let m = ClusterMap::from_reader("lol\t42\n".as_bytes()).unwrap();
        assert_eq!(m.get("lol"), Some(42));
        assert!(matches!(
            ClusterMap::from_reader("x\t1000\n".as_bytes()),
            Err(Error::ClusterOutOfRange { id: 1000, .. })
        ));
        assert!(ClusterMap::from_reader("".as_bytes()).unwrap().is_empty());
    }
}
