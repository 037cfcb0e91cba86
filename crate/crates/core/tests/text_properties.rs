use proptest::prelude::*;
use sentikit::corpus::{Lexicon, LexiconOrigin};
use sentikit::negation::{
    apply_negation_suffix, flip_term_polarity, mark_negation, NegationAnnotation, NegationSite,
    DEFAULT_NEGATION_WORDS, NEG_SUFFIX,
};
use sentikit::tokenizer::{
    emoticon_polarity_of, normalize, split_hashtag, tokenize, tokenize_message, EmoticonPolarity,
    Token, DEFAULT_WORDLIST,
};

mod common;

fn tweetish() -> impl Strategy<Value = String> {
    let piece = prop_oneof![
        "[a-zA-Z]{1,8}",
        Just("http://t.co/x1".to_string()),
        Just("www.example.com".to_string()),
        Just("@bob".to_string()),
        Just("a@b".to_string()),
        Just("#goodtimes".to_string()),
        Just(":)".to_string()),
        Just(":-(".to_string()),
        Just("(:".to_string()),
        Just("!!!".to_string()),
        Just("?!".to_string()),
        Just("...".to_string()),
        Just("don't".to_string()),
        Just("8pm".to_string()),
        Just("3.5".to_string()),
        "[,.;:!?()<>*'\"]{1,3}",
    ];
    prop::collection::vec((piece, prop_oneof![Just(" "), Just(""), Just("  ")]), 0..12).prop_map(
        |parts| {
            parts
                .into_iter()
                .map(|(p, sep)| format!("{p}{sep}"))
                .collect()
        },
    )
}

proptest! {
    #[test]
    fn normalize_is_idempotent(text in tweetish()) {
        let once = normalize(&text);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn retokenizing_joined_surfaces_is_stable(text in tweetish()) {
        let first = tokenize_message(&text);
        let joined = first.tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
        let second = tokenize(&joined);
        prop_assert_eq!(&first.tokens, &second.tokens, "joined: {:?}", joined);
        prop_assert_eq!(tokenize_message(&text), first);
    }

    #[test]
    fn emoticon_polarity_is_a_function(s in "[<>]?[:;=8][-o*']?[)(\\]\\[dDpP/\\\\:}{@|]") {
        let p = emoticon_polarity_of(&s);
        prop_assert_eq!(p, emoticon_polarity_of(&s));
        prop_assert!(matches!(p, EmoticonPolarity::Positive | EmoticonPolarity::Negative | EmoticonPolarity::None));
    }

    #[test]
    fn hashtag_parts_concatenate_to_body(body in "[a-zA-Z0-9_]{1,30}") {
        let parts = split_hashtag(&format!("#{body}"), &DEFAULT_WORDLIST);
        prop_assert_eq!(parts.concat(), body);
        prop_assert!(parts.iter().all(|p| !p.is_empty()));
    }
}

const POOL: [&str; 14] = [
    "good", "bad", "fun", "not", "never", "don't", "no", ",", ".", "!?", "...", ":)", "but", "okay",
];

fn clause_mark(s: &str) -> bool {
    matches!(s, "," | "." | "!?" | "...")
}

fn token_lists() -> impl Strategy<Value = Vec<&'static str>> {
    prop::collection::vec(prop::sample::select(&POOL[..]), 0..16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn negation_spans_match_brute_force(words in token_lists()) {
        let tokens: Vec<Token> = words.iter().map(|w| Token::classify(w)).collect();
        let ann = mark_negation(&tokens, &DEFAULT_NEGATION_WORDS);
        let expected = common::brute_negation_mask(&words, |w| DEFAULT_NEGATION_WORDS.is_negation(w), clause_mark);
        prop_assert_eq!(ann.mask(words.len()), expected);
        for w in ann.spans.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
        prop_assert!(ann.spans.iter().all(|&(s, e)| s <= e && e < words.len()));
    }

    #[test]
    fn suffixing_touches_exactly_the_spans(words in token_lists()) {
        let tokens: Vec<Token> = words.iter().map(|w| Token::classify(w)).collect();
        let ann = mark_negation(&tokens, &DEFAULT_NEGATION_WORDS);
        let suffixed = apply_negation_suffix(&words, &ann);
        let marked = suffixed.iter().filter(|w| w.ends_with(NEG_SUFFIX)).count();
        prop_assert_eq!(marked, ann.negated_len());
        for (i, (before, after)) in words.iter().zip(&suffixed).enumerate() {
            if ann.contains(i) {
                prop_assert_eq!(after, &format!("{before}{NEG_SUFFIX}"));
            } else {
                prop_assert_eq!(after, before);
            }
        }
        prop_assert_eq!(apply_negation_suffix(&suffixed, &NegationAnnotation::default()), suffixed.clone());
    }

    #[test]
    fn flipping_twice_is_identity(scores in prop::collection::vec(-5.0f64..5.0, 0..8), at in 0usize..8, before in any::<bool>()) {
        let site = if before { NegationSite::BeforeTarget } else { NegationSite::At(at) };
        prop_assert_eq!(flip_term_polarity(&flip_term_polarity(&scores, site), site), scores);
    }
}

proptest! {
    #[test]
    fn lexicon_file_round_trip(entries in prop::collection::btree_map("[a-z#]{1,6}", (-10.0f64..10.0, prop::sample::select(vec!["positive", "negative", "anger"])), 0..20)) {
        let mut lex = Lexicon::new("rt", LexiconOrigin::Induced);
        for (term, (score, affect)) in &entries {
            lex.insert(term.clone(), affect, *score);
        }
        let mut buf = Vec::new();
        lex.to_writer(&mut buf).unwrap();
        let (back, warnings) = Lexicon::from_reader(&buf[..], "other").unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(&back.name, "rt");
        prop_assert_eq!(back.origin, LexiconOrigin::Induced);
        prop_assert_eq!(back.len(), lex.len());
        for (term, (score, affect)) in &entries {
            let got = back.score(term, affect).unwrap();
            prop_assert!((got - score).abs() <= 1e-6);
        }
    }
}
