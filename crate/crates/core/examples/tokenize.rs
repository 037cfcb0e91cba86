//! Normalizes and tokenizes a few tweets, printing each token's kind.
//!
//! cargo run --example tokenize -- "optional text"

use sentikit::tokenizer::{
    emoticon_polarity, split_hashtag, tokenize_message, TokenKind, DEFAULT_WORDLIST,
};

fn main() {
    let samples: Vec<String> = match std::env::args().nth(1) {
        Some(text) => vec![text],
        None => vec![
            "@bob I LOVE this soooo much!!! :) http://t.co/abc".into(),
            "can't believe it's raining again :-( #worstdayever".into(),
            "meeting at 8pm... see u 2day (:".into(),
        ],
    };
    for text in samples {
        println!("{text}");
        for t in tokenize_message(&text).tokens {
            let mut notes = Vec::new();
            if t.flags.all_caps {
                notes.push("all-caps".to_string());
            }
            if t.flags.elongated {
                notes.push("elongated".to_string());
            }
            match t.kind {
                TokenKind::Emoticon => notes.push(format!("{:?}", emoticon_polarity(&t))),
                TokenKind::Hashtag => {
                    notes.push(split_hashtag(&t.surface, &DEFAULT_WORDLIST).join("+"))
                }
                _ => {}
            }
            println!("  {:<22} {:<12?} {}", t.surface, t.kind, notes.join(" "));
        }
    }
}
