//! One-vs-rest linear SVM (L1 hinge loss, L2 regularization) trained by dual
//! coordinate descent.
//!
//! For each class the binary dual
//!
//! ```text
//! max  sum(a) - 1/2 |sum_i a_i y_i x_i|^2    s.t. 0 <= a_i <= C
//! ```
//!
//! is solved one coordinate at a time over a fresh random permutation of the
//! examples each epoch. The bias is the weight of an implicit constant-1
//! feature, so it is regularized like any other weight.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::Polarity;
use crate::error::{Error, Result};
use crate::evaluation::macro_f_pos_neg;
use crate::features::{
    build_feature_dictionary, FeatureConfig, FeatureDictionary, FeatureGroup, FeatureVector,
    SparseVector, Task,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainParams {
    pub c: f64,
    pub tol: f64,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            c: 0.005,
            tol: 0.1,
            max_epochs: 1000,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainingProblem {
    pub vectors: Vec<SparseVector>,
    pub labels: Vec<Polarity>,
    pub dictionary: FeatureDictionary,
}

impl TrainingProblem {
    pub fn new(
        vectors: Vec<SparseVector>,
        labels: Vec<Polarity>,
        dictionary: FeatureDictionary,
    ) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::LengthMismatch(vectors.len(), labels.len()));
        }
        let dim = dictionary.len();
        if let Some(bad) = vectors
            .iter()
            .flat_map(|v| v.indices.iter())
            .find(|&&i| i as usize >= dim)
        {
            return Err(Error::InvalidArgument(format!(
                "feature index {bad} outside dictionary of size {dim}"
            )));
        }
        Ok(TrainingProblem {
            vectors,
            labels,
            dictionary,
        })
    }

    /// Builds the dictionary from the vectors themselves.
    pub fn from_features(features: &[FeatureVector], labels: Vec<Polarity>) -> Result<Self> {
        let dictionary = build_feature_dictionary(features);
        let vectors = features.iter().map(|f| dictionary.vectorize(f)).collect();
        TrainingProblem::new(vectors, labels, dictionary)
    }
}

/// Result of one binary dual solve.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySolution {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub alpha: Vec<f64>,
    /// Dual objective after each epoch.
    pub objective: Vec<f64>,
    pub epochs: usize,
    pub converged: bool,
}

impl BinarySolution {
    pub fn decision(&self, x: &SparseVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }
}

fn dual_objective(alpha: &[f64], weights: &[f64], bias: f64) -> f64 {
    let w_sq: f64 = weights.iter().map(|w| w * w).sum::<f64>() + bias * bias;
    alpha.iter().sum::<f64>() - 0.5 * w_sq
}

/// Labels `y` are `+1.0` or `-1.0`.
pub fn train_binary(
    vectors: &[SparseVector],
    y: &[f64],
    dim: usize,
    params: &TrainParams,
) -> Result<BinarySolution> {
    if vectors.len() != y.len() {
        return Err(Error::LengthMismatch(vectors.len(), y.len()));
    }
    if !params.c.is_finite() || params.c <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "C must be positive, got {}",
            params.c
        )));
    }
    let n = vectors.len();
    let c = params.c;
    let q_diag: Vec<f64> = vectors.iter().map(|x| x.norm_sq() + 1.0).collect();
    let mut alpha = vec![0.0; n];
    let mut w = vec![0.0; dim];
    let mut bias = 0.0;
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut objective = Vec::new();
    let mut converged = false;
    let mut epochs = 0;

    while epochs < params.max_epochs {
        epochs += 1;
        order.shuffle(&mut rng);
        let mut max_violation: f64 = 0.0;
        for &i in &order {
            let x = &vectors[i];
            let g = y[i] * (x.dot(&w) + bias) - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / q_diag[i]).clamp(0.0, c);
                let step = (alpha[i] - old) * y[i];
                if step != 0.0 {
                    for (j, v) in x.iter() {
                        w[j] += step * v;
                    }
                    bias += step;
                }
            }
        }
        objective.push(dual_objective(&alpha, &w, bias));
        if max_violation < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!(
            "dual coordinate descent stopped after {epochs} epochs without reaching tol {}",
            params.tol
        );
    }
    Ok(BinarySolution {
        weights: w,
        bias,
        alpha,
        objective,
        epochs,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    /// Indexed by `Polarity::index()`.
    pub weights: [Vec<f64>; 3],
    pub bias: [f64; 3],
    pub dictionary: FeatureDictionary,
    pub c: f64,
    pub tol: f64,
    pub task: Task,
    /// Extraction settings the model was trained under.
    pub features: FeatureConfig,
}

pub fn train(problem: &TrainingProblem, params: &TrainParams) -> Result<LinearModel> {
    train_for_task(problem, params, Task::Message, &FeatureConfig::default())
}

pub fn train_for_task(
    problem: &TrainingProblem,
    params: &TrainParams,
    task: Task,
    features: &FeatureConfig,
) -> Result<LinearModel> {
    for class in Polarity::ALL {
        if !problem.labels.contains(&class) {
            return Err(Error::MissingClass(class));
        }
    }
    let dim = problem.dictionary.len();
    let solutions = Polarity::ALL
        .par_iter()
        .map(|&class| {
            let y: Vec<f64> = problem
                .labels
                .iter()
                .map(|&l| if l == class { 1.0 } else { -1.0 })
                .collect();
            let class_params = TrainParams {
                seed: params.seed.wrapping_add(class.index() as u64),
                ..*params
            };
            train_binary(&problem.vectors, &y, dim, &class_params)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut weights: [Vec<f64>; 3] = Default::default();
    let mut bias = [0.0; 3];
    for (k, s) in solutions.into_iter().enumerate() {
        weights[k] = s.weights;
        bias[k] = s.bias;
    }
    Ok(LinearModel {
        weights,
        bias,
        dictionary: problem.dictionary.clone(),
        c: params.c,
        tol: params.tol,
        task,
        features: features.clone(),
    })
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".dict");
    PathBuf::from(s)
}

impl LinearModel {
    pub fn decision_values(&self, x: &SparseVector) -> [f64; 3] {
        std::array::from_fn(|k| x.dot(&self.weights[k]) + self.bias[k])
    }

    /// Argmax of the decision values; earlier classes win ties.
    pub fn predict(&self, x: &SparseVector) -> Polarity {
        let scores = self.decision_values(x);
        let mut best = 0;
        for k in 1..3 {
            if scores[k] > scores[best] {
                best = k;
            }
        }
        Polarity::ALL[best]
    }

    pub fn predict_features(&self, fv: &FeatureVector) -> Polarity {
        self.predict(&self.dictionary.vectorize(fv))
    }

    /// Writes the model and its dictionary sidecar (`<path>.dict`).
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let dict_path = sidecar(path);
        let file = File::create(&dict_path).map_err(|e| Error::io(&dict_path, e))?;
        self.dictionary
            .write_to(BufWriter::new(file))
            .map_err(|e| Error::io(&dict_path, e))?;
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let classes: Vec<&str> = Polarity::ALL.iter().map(|p| p.as_str()).collect();
        writeln!(w, "#classes\t{}", classes.join("\t"))?;
        writeln!(w, "#dictionary_size\t{}", self.dictionary.len())?;
        writeln!(w, "#dictionary_hash\t{}", self.dictionary.fingerprint())?;
        writeln!(w, "#C\t{:.8e}", self.c)?;
        writeln!(w, "#tol\t{:.8e}", self.tol)?;
        writeln!(w, "#task\t{}", self.task)?;
        let mut disabled: Vec<&str> = self.features.disabled.iter().map(|g| g.name()).collect();
        disabled.sort_unstable();
        writeln!(w, "#disabled\t{}", disabled.join(","))?;
        writeln!(w, "#unigrams_only\t{}", self.features.unigrams_only)?;
        writeln!(w, "#context_window\t{}", self.features.context_window)?;
        writeln!(
            w,
            "#bias\t{:.8e}\t{:.8e}\t{:.8e}",
            self.bias[0], self.bias[1], self.bias[2]
        )?;
        for i in 0..self.dictionary.len() {
            let row = [self.weights[0][i], self.weights[1][i], self.weights[2][i]];
            if row.iter().any(|&v| v != 0.0) {
                writeln!(w, "{i}\t{:.8e}\t{:.8e}\t{:.8e}", row[0], row[1], row[2])?;
            }
        }
        w.flush()
    }

    /// Loads a model with the dictionary from its sidecar file.
    pub fn load(path: impl AsRef<Path>) -> Result<LinearModel> {
        let path = path.as_ref();
        Self::load_with_dictionary(path, sidecar(path))
    }

    pub fn load_with_dictionary(
        path: impl AsRef<Path>,
        dictionary: impl AsRef<Path>,
    ) -> Result<LinearModel> {
        let dict_path = dictionary.as_ref();
        let file = File::open(dict_path).map_err(|e| Error::io(dict_path, e))?;
        let dictionary = FeatureDictionary::read_from(BufReader::new(file))
            .map_err(|e| Error::io(dict_path, e))?;
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file), dictionary)
    }

    /// Parses a model body against a dictionary; size or fingerprint
    /// disagreement is a [`Error::DictionaryMismatch`].
    pub fn read_from<R: BufRead>(reader: R, dictionary: FeatureDictionary) -> Result<LinearModel> {
        let dim = dictionary.len();
        let mut weights: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; dim]);
        let mut bias = [0.0; 3];
        let mut c = None;
        let mut tol = None;
        let mut task = Task::Message;
        let mut features = FeatureConfig::default();
        let mut seen_size = false;
        let number = |s: &str, line: usize| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::parse(line, format!("invalid number '{s}'")))
        };
        for (n, line) in reader.lines().enumerate() {
            let lineno = n + 1;
            let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields[0] {
                "#classes" => {
                    let expected: Vec<&str> = Polarity::ALL.iter().map(|p| p.as_str()).collect();
                    if fields[1..] != expected[..] {
                        return Err(Error::parse(
                            lineno,
                            format!("unsupported class order {:?}", &fields[1..]),
                        ));
                    }
                }
                "#dictionary_size" => {
                    let size: usize = fields
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::parse(lineno, "invalid dictionary size"))?;
                    if size != dim {
                        return Err(Error::DictionaryMismatch(format!(
                            "model expects {size} features, dictionary has {dim}"
                        )));
                    }
                    seen_size = true;
                }
                "#dictionary_hash" => {
                    let fp = dictionary.fingerprint();
                    if fields.get(1) != Some(&fp.as_str()) {
                        return Err(Error::DictionaryMismatch(
                            "fingerprint differs from the model's".into(),
                        ));
                    }
                }
                "#C" => c = Some(number(fields.get(1).unwrap_or(&""), lineno)?),
                "#tol" => tol = Some(number(fields.get(1).unwrap_or(&""), lineno)?),
                "#task" => task = fields.get(1).unwrap_or(&"").parse()?,
                "#disabled" => {
                    features.disabled = FeatureGroup::parse_list(fields.get(1).unwrap_or(&""))?
                        .into_iter()
                        .collect()
                }
                "#unigrams_only" => features.unigrams_only = fields.get(1) == Some(&"true"),
                "#context_window" => {
                    features.context_window = fields
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::parse(lineno, "invalid context window"))?
                }
                "#bias" => {
                    if fields.len() != 4 {
                        return Err(Error::parse(lineno, "expected three bias values"));
                    }
                    for k in 0..3 {
                        bias[k] = number(fields[k + 1], lineno)?;
                    }
                }
                f if f.starts_with('#') => {}
                idx => {
                    if fields.len() != 4 {
                        return Err(Error::parse(lineno, "expected index and three weights"));
                    }
                    let i: usize = idx
                        .parse()
                        .map_err(|_| Error::parse(lineno, format!("invalid index '{idx}'")))?;
                    if i >= dim {
                        return Err(Error::DictionaryMismatch(format!(
                            "weight row {i} outside dictionary of size {dim}"
                        )));
                    }
                    for k in 0..3 {
                        weights[k][i] = number(fields[k + 1], lineno)?;
                    }
                }
            }
        }
        if !seen_size {
            return Err(Error::parse(0, "missing #dictionary_size header"));
        }
        let params = TrainParams::default();
        Ok(LinearModel {
            weights,
            bias,
            dictionary,
            c: c.unwrap_or(params.c),
            tol: tol.unwrap_or(params.tol),
            task,
            features,
        })
    }
}

/// Fold id per example. Each class is shuffled and dealt round-robin; when
/// some present class has fewer than `k` members the split falls back to a
/// plain shuffle.
pub fn stratified_folds(labels: &[Polarity], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if k > labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{k} folds for {} examples",
            labels.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<Vec<usize>> = Polarity::ALL
        .iter()
        .map(|&c| (0..labels.len()).filter(|&i| labels[i] == c).collect())
        .collect();
    let stratify = groups.iter().all(|g| g.is_empty() || g.len() >= k);
    let groups = if stratify {
        groups
    } else {
        log::warn!("a class has fewer than {k} examples; using non-stratified folds");
        vec![(0..labels.len()).collect()]
    };
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for mut g in groups {
        g.shuffle(&mut rng);
        for i in g {
            folds[i] = next % k;
            next += 1;
        }
    }
    Ok(folds)
}

/// Macro-F of each held-out fold. The feature dictionary is rebuilt from the
/// training part of every fold.
pub fn cross_validate(
    features: &[FeatureVector],
    labels: &[Polarity],
    k: usize,
    params: &TrainParams,
) -> Result<Vec<f64>> {
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch(features.len(), labels.len()));
    }
    let folds = stratified_folds(labels, k, params.seed)?;
    (0..k)
        .into_par_iter()
        .map(|fold| {
            let (train_idx, test_idx): (Vec<usize>, Vec<usize>) =
                (0..labels.len()).partition(|&i| folds[i] != fold);
            let train_fv: Vec<FeatureVector> =
                train_idx.iter().map(|&i| features[i].clone()).collect();
            let train_labels = train_idx.iter().map(|&i| labels[i]).collect();
            let problem = TrainingProblem::from_features(&train_fv, train_labels)?;
            let model = train(&problem, params)?;
            let gold: Vec<Polarity> = test_idx.iter().map(|&i| labels[i]).collect();
            let pred: Vec<Polarity> = test_idx
                .iter()
                .map(|&i| model.predict_features(&features[i]))
                .collect();
            Ok(macro_f_pos_neg(&gold, &pred)?.macro_f)
        })
        .collect()
}
