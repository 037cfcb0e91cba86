//! Macro-F over the positive and negative classes, baselines, and feature
//! group ablations.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::corpus::Polarity;
use crate::error::{Error, Result};
use crate::features::{Extractor, FeatureConfig, FeatureGroup, FeatureVector};
use crate::linear_model::{train_for_task, LinearModel, TrainParams, TrainingProblem};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Mean of the positive and negative F-scores, scaled to 0..100.
    pub macro_f: f64,
    /// Indexed by `Polarity::index()`, each in 0..1.
    pub precision: [f64; 3],
    pub recall: [f64; 3],
    pub f: [f64; 3],
    /// `confusion[gold][predicted]`.
    pub confusion: [[u64; 3]; 3],
    pub n: usize,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn macro_f_pos_neg(gold: &[Polarity], pred: &[Polarity]) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch(gold.len(), pred.len()));
    }
    if gold.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot evaluate an empty set".into(),
        ));
    }
    let mut confusion = [[0u64; 3]; 3];
    for (g, p) in gold.iter().zip(pred) {
        confusion[g.index()][p.index()] += 1;
    }
    let mut precision = [0.0; 3];
    let mut recall = [0.0; 3];
    let mut f = [0.0; 3];
    for c in 0..3 {
        let tp = confusion[c][c];
        let predicted: u64 = (0..3).map(|g| confusion[g][c]).sum();
        let actual: u64 = confusion[c].iter().sum();
        precision[c] = ratio(tp, predicted);
        recall[c] = ratio(tp, actual);
        let den = precision[c] + recall[c];
        f[c] = if den == 0.0 {
            0.0
        } else {
            2.0 * precision[c] * recall[c] / den
        };
    }
    let macro_f = (f[Polarity::Positive.index()] + f[Polarity::Negative.index()]) / 2.0 * 100.0;
    Ok(EvalReport {
        macro_f,
        precision,
        recall,
        f,
        confusion,
        n: gold.len(),
    })
}

impl EvalReport {
    /// Aligned plain-text summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "instances  {}", self.n);
        let _ = writeln!(out, "macro-F    {:.2}", self.macro_f);
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>9} {:>9}",
            "class", "precision", "recall", "F"
        );
        for c in Polarity::ALL {
            let k = c.index();
            let _ = writeln!(
                out,
                "{:<10} {:>9.2} {:>9.2} {:>9.2}",
                c.as_str(),
                self.precision[k] * 100.0,
                self.recall[k] * 100.0,
                self.f[k] * 100.0
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>9} {:>9}",
            "gold\\pred", "negative", "neutral", "positive"
        );
        for c in Polarity::ALL {
            let row = self.confusion[c.index()];
            let _ = writeln!(
                out,
                "{:<10} {:>9} {:>9} {:>9}",
                c.as_str(),
                row[0],
                row[1],
                row[2]
            );
        }
        out
    }

    /// `key<TAB>value` lines.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n\t{}", self.n);
        let _ = writeln!(out, "macro_f\t{:.2}", self.macro_f);
        for c in Polarity::ALL {
            let k = c.index();
            let _ = writeln!(out, "precision_{c}\t{:.2}", self.precision[k] * 100.0);
            let _ = writeln!(out, "recall_{c}\t{:.2}", self.recall[k] * 100.0);
            let _ = writeln!(out, "f_{c}\t{:.2}", self.f[k] * 100.0);
        }
        for g in Polarity::ALL {
            for p in Polarity::ALL {
                let _ = writeln!(
                    out,
                    "confusion_{g}_{p}\t{}",
                    self.confusion[g.index()][p.index()]
                );
            }
        }
        out
    }
}

/// Always predicts one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajorityBaseline {
    pub class: Polarity,
}

impl MajorityBaseline {
    pub fn predict(&self) -> Polarity {
        self.class
    }

    pub fn predict_all(&self, n: usize) -> Vec<Polarity> {
        vec![self.class; n]
    }
}

/// The more frequent of positive and negative; ties go to positive.
pub fn majority_baseline(train_labels: &[Polarity]) -> MajorityBaseline {
    let count = |c| train_labels.iter().filter(|&&l| l == c).count();
    let class = if count(Polarity::Negative) > count(Polarity::Positive) {
        Polarity::Negative
    } else {
        Polarity::Positive
    };
    MajorityBaseline { class }
}

/// Featurizes `train` under `config`, fits a model, and scores it on `test`.
pub fn train_and_evaluate<E: Extractor>(
    extractor: &E,
    train: &[E::Item],
    test: &[E::Item],
    config: &FeatureConfig,
    params: &TrainParams,
) -> Result<(LinearModel, EvalReport)> {
    let model = fit(extractor, train, config, params)?;
    let report = evaluate(extractor, &model, test)?;
    Ok((model, report))
}

pub fn fit<E: Extractor>(
    extractor: &E,
    train: &[E::Item],
    config: &FeatureConfig,
    params: &TrainParams,
) -> Result<LinearModel> {
    let features: Vec<FeatureVector> = train
        .par_iter()
        .map(|i| extractor.extract_with(i, config))
        .collect();
    let labels = train.iter().map(E::label).collect();
    let problem = TrainingProblem::from_features(&features, labels)?;
    train_for_task(&problem, params, extractor.task(), config)
}

pub fn predict<E: Extractor>(
    extractor: &E,
    model: &LinearModel,
    items: &[E::Item],
) -> Vec<Polarity> {
    let config = &model.features;
    items
        .par_iter()
        .map(|i| model.predict_features(&extractor.extract_with(i, config)))
        .collect()
}

/// Featurizes `test` with the model's own extraction settings.
pub fn evaluate<E: Extractor>(
    extractor: &E,
    model: &LinearModel,
    test: &[E::Item],
) -> Result<EvalReport> {
    let pred = predict(extractor, model, test);
    let gold: Vec<Polarity> = test.iter().map(E::label).collect();
    macro_f_pos_neg(&gold, &pred)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    /// `None` for the all-features run.
    pub removed: Option<FeatureGroup>,
    pub macro_f: f64,
    pub delta: f64,
}

impl AblationRow {
    pub fn label(&self) -> String {
        match self.removed {
            None => "all".to_string(),
            Some(g) => format!("all - {g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationTable {
    /// The all-features row first, then groups in request order.
    pub rows: Vec<AblationRow>,
}

impl AblationTable {
    pub fn full(&self) -> &AblationRow {
        &self.rows[0]
    }

    pub fn row(&self, group: FeatureGroup) -> Option<&AblationRow> {
        self.rows.iter().find(|r| r.removed == Some(group))
    }

    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.label().len())
            .max()
            .unwrap_or(0)
            .max(8);
        let mut out = format!("{:<width$}  {:>8}  {:>8}\n", "features", "macro-F", "delta");
        for r in &self.rows {
            let delta = if r.removed.is_none() {
                String::new()
            } else {
                format!("{:+.2}", r.delta)
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>8.2}  {:>8}",
                r.label(),
                r.macro_f,
                delta
            );
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("group\tmacro_f\tdelta\n");
        for r in &self.rows {
            let group = r.removed.map_or("all", FeatureGroup::name);
            let _ = writeln!(out, "{group}\t{:.2}\t{:.2}", r.macro_f, r.delta);
        }
        out
    }
}

/// Retrains once with all features and once per removed group, with the
/// same seed each time.
pub fn run_ablation<E: Extractor>(
    extractor: &E,
    groups: &[FeatureGroup],
    train: &[E::Item],
    test: &[E::Item],
    params: &TrainParams,
) -> Result<AblationTable> {
    let base = extractor.config().clone();
    let configs: Vec<(Option<FeatureGroup>, FeatureConfig)> = std::iter::once((None, base.clone()))
        .chain(groups.iter().map(|&g| (Some(g), base.clone().without(g))))
        .collect();
    let scores = configs
        .par_iter()
        .map(|(_, cfg)| {
            train_and_evaluate(extractor, train, test, cfg, params).map(|(_, r)| r.macro_f)
        })
        .collect::<Result<Vec<f64>>>()?;
    let all = scores[0];
    let rows = configs
        .iter()
        .zip(scores)
        .map(|((removed, _), macro_f)| AblationRow {
            removed: *removed,
            macro_f,
            delta: macro_f - all,
        })
        .collect();
    Ok(AblationTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Polarity::*;

    fn distribution(pos: usize, neg: usize, neu: usize) -> Vec<Polarity> {
        let mut v = vec![Positive; pos];
        v.extend(vec![Negative; neg]);
        v.extend(vec![Neutral; neu]);
        v
    }

    fn majority_f(pos: usize, neg: usize, neu: usize) -> f64 {
        let gold = distribution(pos, neg, neu);
        let pred = majority_baseline(&gold).predict_all(gold.len());
        macro_f_pos_neg(&gold, &pred).unwrap().macro_f
    }

    #[test]
    fn majority_rows() {
        assert!((majority_f(1572, 601, 1640) - 29.19).abs() < 0.01);
        assert!((majority_f(492, 394, 1208) - 19.03).abs() < 0.01);
    }

    #[test]
    fn majority_choice() {
        assert_eq!(
            majority_baseline(&distribution(3045, 1209, 4)).class,
            Positive
        );
        assert_eq!(majority_baseline(&distribution(2, 5, 0)).class, Negative);
        assert_eq!(majority_baseline(&distribution(3, 3, 9)).class, Positive);
    }

    #[test]
    fn perfect_and_degenerate() {
        let gold = distribution(3, 2, 4);
        let r = macro_f_pos_neg(&gold, &gold).unwrap();
        assert_eq!(r.macro_f, 100.0);
        assert_eq!(r.confusion[Neutral.index()][Neutral.index()], 4);
        let none = macro_f_pos_neg(&gold, &vec![Neutral; gold.len()]).unwrap();
        assert_eq!(none.macro_f, 0.0);
        assert!(macro_f_pos_neg(&gold, &gold[1..]).is_err());
    }

    #[test]
    fn confusion_rows_sum_to_gold() {
        let gold = [Positive, Negative, Neutral, Positive, Negative];
        let pred = [Positive, Neutral, Neutral, Negative, Negative];
        let r = macro_f_pos_neg(&gold, &pred).unwrap();
        for c in Polarity::ALL {
            let expected = gold.iter().filter(|&&g| g == c).count() as u64;
            assert_eq!(r.confusion[c.index()].iter().sum::<u64>(), expected);
        }
        // pos: P=1, R=0.5, F=2/3; neg: P=0.5, R=0.5, F=0.5
        assert!((r.macro_f - (2.0 / 3.0 + 0.5) / 2.0 * 100.0).abs() < 1e-9);
    }

    #[test]
    fn table_formats() {
        let t = AblationTable {
            rows: vec![
                AblationRow {
                    removed: None,
                    macro_f: 60.0,
                    delta: 0.0,
                },
                AblationRow {
                    removed: Some(FeatureGroup::Lexicons),
                    macro_f: 51.4,
                    delta: -8.6,
                },
            ],
        };
        assert_eq!(
            t.to_tsv(),
            "group\tmacro_f\tdelta\nall\t60.00\t0.00\nlexicons\t51.40\t-8.60\n"
        );
        assert!(t.render().contains("all - lexicons     51.40     -8.60"));
    }
}
