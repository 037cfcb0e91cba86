//! Induces a PMI lexicon from hashtag-labeled synthetic tweets and prints the
//! strongest entries of each polarity.

use sentikit::lexicon_builder::{build_lexicon, BuildParams, Labeling};
use sentikit::synth::{planted_messages, seed_hashtag_collection, SynthConfig};
use sentikit::tokenizer::tokenize_message;

fn main() -> sentikit::Result<()> {
    let vocabulary = planted_messages(1, &SynthConfig::default(), 1).vocabulary;
    let (texts, seeds) = seed_hashtag_collection(&vocabulary, 5000, 7)?;
    let corpus: Vec<_> = texts.iter().map(|t| tokenize_message(t)).collect();
    let lexicon = build_lexicon(
        &corpus,
        &Labeling::Hashtag(seeds),
        &BuildParams::default(),
        "induced",
    )?;

    let mut unigrams: Vec<(&str, f64)> = lexicon
        .entries
        .iter()
        .filter_map(|(term, scores)| Some((term.strip_prefix("uni:")?, *scores.get("positive")?)))
        .collect();
    unigrams.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
    println!("{} terms from {} tweets", lexicon.len(), texts.len());
    println!("most positive:");
    for (w, s) in unigrams.iter().take(8) {
        let planted = if vocabulary.positive.iter().any(|p| p == w) {
            "planted +"
        } else {
            ""
        };
        println!("  {w:<12} {s:+.3} {planted}");
    }
    println!("most negative:");
    for (w, s) in unigrams.iter().rev().take(8) {
        let planted = if vocabulary.negative.iter().any(|p| p == w) {
            "planted -"
        } else {
            ""
        };
        println!("  {w:<12} {s:+.3} {planted}");
    }
    Ok(())
}
