//! Majority baseline against unigram and full-feature SVMs, plus the
//! majority scores implied by fixed class distributions.

use sentikit::corpus::Polarity;
use sentikit::evaluation::{macro_f_pos_neg, majority_baseline, train_and_evaluate};
use sentikit::features::MessageExtractor;
use sentikit::linear_model::TrainParams;
use sentikit::synth::{planted_messages, SynthConfig};
use sentikit::{FeatureConfig, Resources};

fn distribution(pos: usize, neg: usize, neu: usize) -> Vec<Polarity> {
    [
        (Polarity::Positive, pos),
        (Polarity::Negative, neg),
        (Polarity::Neutral, neu),
    ]
    .into_iter()
    .flat_map(|(p, n)| std::iter::repeat_n(p, n))
    .collect()
}

fn main() -> sentikit::Result<()> {
    for (name, gold) in [
        ("1572/601/1640", distribution(1572, 601, 1640)),
        ("492/394/1208", distribution(492, 394, 1208)),
    ] {
        let base = majority_baseline(&gold);
        let f = macro_f_pos_neg(&gold, &base.predict_all(gold.len()))?.macro_f;
        println!("majority on {name}: predicts {} -> {f:.2}", base.class);
    }

    let split = planted_messages(1000, &SynthConfig::default(), 1);
    let res = Resources::new(vec![split.lexicon.clone()], Default::default());
    let ext = MessageExtractor::new(&res, FeatureConfig::default());
    let params = TrainParams {
        c: 0.5,
        ..Default::default()
    };
    let gold: Vec<Polarity> = split.test.iter().map(|m| m.label).collect();
    let base = majority_baseline(&split.train.iter().map(|m| m.label).collect::<Vec<_>>());
    let maj = macro_f_pos_neg(&gold, &base.predict_all(gold.len()))?.macro_f;
    let (_, uni) = train_and_evaluate(
        &ext,
        &split.train,
        &split.test,
        &FeatureConfig::unigram_baseline(),
        &params,
    )?;
    let (_, all) = train_and_evaluate(
        &ext,
        &split.train,
        &split.test,
        &FeatureConfig::default(),
        &params,
    )?;
    println!(
        "\nsynthetic messages: majority {maj:.2}, unigrams {:.2}, all features {:.2}",
        uni.macro_f, all.macro_f
    );
    Ok(())
}
