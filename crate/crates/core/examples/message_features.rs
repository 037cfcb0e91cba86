//! Dumps the message-level feature vector of one tweet.
//!
//! cargo run --example message_features -- "optional text"

use sentikit::corpus::{LabeledMessage, Lexicon, LexiconOrigin, Polarity};
use sentikit::features::MessageExtractor;
use sentikit::{FeatureConfig, Resources};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "I don't love rainy days :( #GoodTimes soooo GREAT!!".into());
    let mut lexicon = Lexicon::new("demo", LexiconOrigin::Manual);
    for (word, score) in [
        ("love", 1.0),
        ("great", 1.0),
        ("good", 1.0),
        ("rainy", -1.0),
    ] {
        lexicon.insert(word, "positive", score);
        lexicon.insert(word, "negative", -score);
    }
    let resources = Resources::new(vec![lexicon], Default::default());
    let extractor = MessageExtractor::new(&resources, FeatureConfig::default());
    let message = LabeledMessage {
        id: "demo".into(),
        text,
        label: Polarity::Neutral,
        tagged: None,
    };
    print!("{}", extractor.extract(&message).dump_string());
}
