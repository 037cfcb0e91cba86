//! Trains a message-level classifier on a synthetic corpus, saves it, loads
//! it back and evaluates on held-out messages.

use sentikit::evaluation::{evaluate, fit};
use sentikit::features::MessageExtractor;
use sentikit::linear_model::TrainParams;
use sentikit::synth::{planted_messages, SynthConfig};
use sentikit::{FeatureConfig, LinearModel, Resources};

fn main() -> sentikit::Result<()> {
    let split = planted_messages(1000, &SynthConfig::default(), 1);
    let resources = Resources::new(vec![split.lexicon.clone()], Default::default());
    let config = FeatureConfig::default();
    let extractor = MessageExtractor::new(&resources, config.clone());
    let params = TrainParams {
        c: 0.5,
        ..Default::default()
    };

    let model = fit(&extractor, &split.train, &config, &params)?;
    let path = std::env::temp_dir().join("sentikit-example-message.model");
    model.save(&path)?;
    let loaded = LinearModel::load(&path)?;
    println!(
        "{} features, model saved to {}",
        loaded.dictionary.len(),
        path.display()
    );
    print!("{}", evaluate(&extractor, &loaded, &split.test)?.render());
    Ok(())
}
