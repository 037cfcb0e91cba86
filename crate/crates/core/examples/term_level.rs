//! Term-level classification: features for one target, then a trained model
//! on synthetic term instances.

use sentikit::corpus::{Polarity, TermInstance};
use sentikit::evaluation::train_and_evaluate;
use sentikit::features::{extract_term_features, TermExtractor};
use sentikit::linear_model::TrainParams;
use sentikit::synth::{planted_terms, SynthConfig};
use sentikit::{FeatureConfig, Resources};

fn main() -> sentikit::Result<()> {
    let resources = Resources::new(vec![], Default::default());
    let inst = TermInstance {
        id: "t1".into(),
        text: "the food was not good at all , service great".into(),
        span: (3, 4),
        label: Polarity::Negative,
    };
    println!("features of target 'not good':");
    print!(
        "{}",
        extract_term_features(&inst, &resources, &FeatureConfig::default()).dump_string()
    );

    let split = planted_terms(1000, &SynthConfig::default(), 1);
    let resources = Resources::new(vec![split.lexicon.clone()], Default::default());
    let extractor = TermExtractor::new(&resources, FeatureConfig::default());
    let params = TrainParams {
        c: 0.5,
        ..Default::default()
    };
    let (_, report) = train_and_evaluate(
        &extractor,
        &split.train,
        &split.test,
        &FeatureConfig::default(),
        &params,
    )?;
    println!("\nsynthetic term task:");
    print!("{}", report.render());
    Ok(())
}
