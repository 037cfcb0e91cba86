//! Shows negated contexts and the `_NEG` suffix on message tokens.

use sentikit::negation::{apply_negation_suffix, mark_negation, DEFAULT_NEGATION_WORDS};
use sentikit::tokenizer::tokenize_message;

fn main() {
    for text in [
        "I don't like this, but the ending was ok",
        "not never happy. no way",
        "this is not good at all",
        "nothing",
    ] {
        let msg = tokenize_message(text);
        let ann = mark_negation(&msg.tokens, &DEFAULT_NEGATION_WORDS);
        let words = apply_negation_suffix(&msg.lowered(), &ann);
        println!("{text}\n  spans {:?}\n  {}", ann.spans, words.join(" "));
    }
}
