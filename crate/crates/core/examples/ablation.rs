//! Leave-one-group-out ablation on synthetic messages and terms.

use sentikit::evaluation::run_ablation;
use sentikit::features::{MessageExtractor, TermExtractor};
use sentikit::linear_model::TrainParams;
use sentikit::synth::{planted_messages, planted_terms, SynthConfig};
use sentikit::{FeatureConfig, FeatureGroup, Resources};

fn main() -> sentikit::Result<()> {
    let cfg = SynthConfig::default();
    let params = TrainParams {
        c: 0.5,
        ..Default::default()
    };

    let split = planted_messages(1000, &cfg, 1);
    let res = Resources::new(vec![split.lexicon.clone()], Default::default());
    let ext = MessageExtractor::new(&res, FeatureConfig::default());
    println!("message level");
    print!(
        "{}",
        run_ablation(
            &ext,
            &FeatureGroup::MESSAGE,
            &split.train,
            &split.test,
            &params
        )?
        .render()
    );

    let terms = planted_terms(1000, &cfg, 1);
    let res = Resources::new(vec![terms.lexicon.clone()], Default::default());
    let ext = TermExtractor::new(&res, FeatureConfig::default());
    println!("\nterm level");
    print!(
        "{}",
        run_ablation(
            &ext,
            &[FeatureGroup::Target, FeatureGroup::Context],
            &terms.train,
            &terms.test,
            &params
        )?
        .render()
    );
    Ok(())
}
