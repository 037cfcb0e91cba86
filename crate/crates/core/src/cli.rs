//! Command-line front end. [`run`] is the whole program minus process
//! setup, so it can be driven from tests.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{
    load_cluster_map, load_message_corpus, load_polarity_lexicon, load_term_corpus, unescape_text,
    write_lexicon, ClusterMap, CorpusFormat, LabeledMessage, TermInstance,
};
use crate::error::{Error, Result};
use crate::evaluation::{self, run_ablation};
use crate::features::{
    Extractor, FeatureConfig, FeatureGroup, MessageExtractor, Resources, Task, TermExtractor,
};
use crate::lexicon_builder::{build_lexicon, BuildParams, CandidateFilter, Labeling, SeedSet};
use crate::linear_model::{cross_validate, LinearModel, TrainParams};
use crate::tokenizer::tokenize_message;

#[derive(Debug, Parser)]
#[command(
    name = "sentikit",
    version,
    about = "Tweet and SMS sentiment classification"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Induce a PMI sentiment lexicon from pseudo-labeled messages.
    BuildLexicon(BuildLexiconArgs),
    /// Train a model and save it with its feature dictionary.
    Train(TrainArgs),
    /// Label a corpus with a saved model.
    Predict(PredictArgs),
    /// Score a saved model on a labeled corpus.
    Evaluate(PredictArgs),
    /// Retrain with each feature group removed and report the F-score deltas.
    Ablate(AblateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelingArg {
    Hashtag,
    Emoticon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    /// One message per line (`\t`, `\n`, `\\` escapes allowed).
    Text,
    /// `id<TAB>label<TAB>text`; labels are ignored.
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TaskArg {
    Message,
    Term,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Task {
        match t {
            TaskArg::Message => Task::Message,
            TaskArg::Term => Task::Term,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MessageFormat {
    Tsv,
    /// TSV with a fourth column of `surface/TAG` tokens.
    Tagged,
}

impl From<MessageFormat> for CorpusFormat {
    fn from(f: MessageFormat) -> CorpusFormat {
        match f {
            MessageFormat::Tsv => CorpusFormat::Tsv,
            MessageFormat::Tagged => CorpusFormat::Tagged,
        }
    }
}

#[derive(Debug, Args)]
struct BuildLexiconArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: InputFormat,
    #[arg(long, value_enum, default_value = "hashtag")]
    labeling: LabelingArg,
    /// `#tag<TAB>positive|negative` lines; required for hashtag labeling.
    #[arg(long)]
    seeds: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    min_count: u64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Count a term once per message rather than once per occurrence.
    #[arg(long)]
    per_message: bool,
    /// Largest number of tokens allowed between the parts of a pair.
    #[arg(long)]
    max_gap: Option<usize>,
    /// Keep pairs that contain function words.
    #[arg(long)]
    keep_function_words: bool,
    /// Lexicon name used in feature names (default: output file stem).
    #[arg(long)]
    name: Option<String>,
    #[arg(long, alias = "output")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ResourceArgs {
    /// Lexicon file; repeat for several.
    #[arg(long = "lexicon")]
    lexicons: Vec<PathBuf>,
    /// `token<TAB>cluster-id` file.
    #[arg(long)]
    clusters: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "tsv")]
    format: MessageFormat,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long = "c", default_value_t = 0.005)]
    c: f64,
    #[arg(long, default_value_t = 0.1)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_epochs: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SolverArgs {
    fn params(&self) -> Result<TrainParams> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        Ok(TrainParams {
            c: self.c,
            tol: self.tol,
            max_epochs: self.max_epochs,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Args)]
struct FeatureArgs {
    /// Comma-separated feature groups to switch off.
    #[arg(long, default_value = "")]
    disable: String,
    /// Word unigrams only.
    #[arg(long)]
    unigrams_only: bool,
    /// Context tokens on each side of a term target.
    #[arg(long, default_value_t = 4)]
    window: usize,
}

impl FeatureArgs {
    fn config(&self) -> Result<FeatureConfig> {
        let mut cfg = FeatureConfig {
            unigrams_only: self.unigrams_only,
            context_window: self.window,
            ..FeatureConfig::default()
        };
        for g in FeatureGroup::parse_list(&self.disable)? {
            cfg = cfg.without(g);
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long, value_enum, default_value = "message")]
    task: TaskArg,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Also report k-fold cross-validation macro-F on the training data.
    #[arg(long)]
    cv: Option<usize>,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    features: FeatureArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    /// Dictionary file (default: `<model>.dict`).
    #[arg(long)]
    dictionary: Option<PathBuf>,
    #[arg(long)]
    input: PathBuf,
    /// Write `key<TAB>value` lines instead of the aligned report.
    #[arg(long)]
    tsv: bool,
    #[command(flatten)]
    resources: ResourceArgs,
}

#[derive(Debug, Args)]
struct AblateArgs {
    #[arg(long, value_enum, default_value = "message")]
    task: TaskArg,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    /// Comma-separated groups to remove one at a time (default: every group
    /// that applies to the task).
    #[arg(long)]
    groups: Option<String>,
    /// Write `group<TAB>macro_f<TAB>delta` instead of the aligned table.
    #[arg(long)]
    tsv: bool,
    #[command(flatten)]
    resources: ResourceArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    features: FeatureArgs,
}

/// Parses `args` (program name first) and runs one subcommand. Returns the
/// exit status: 0 success, 1 processing error, 2 usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return 1;
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(cli.command, &mut buf));
    if let Err(e) = out.write_all(&buf).and_then(|_| out.flush()) {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 1;
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::BuildLexicon(a) => cmd_build_lexicon(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Predict(a) => cmd_predict(&a, out),
        Command::Evaluate(a) => cmd_evaluate(&a, out),
        Command::Ablate(a) => cmd_ablate(&a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<stdout>", e))
}

fn read_messages(path: &Path, format: InputFormat) -> Result<Vec<String>> {
    match format {
        InputFormat::Tsv => Ok(load_message_corpus(path, CorpusFormat::Tsv)?
            .into_iter()
            .map(|m| m.text)
            .collect()),
        InputFormat::Text => {
            let file = File::open(path).map_err(|e| Error::io(path, e))?;
            let mut texts = Vec::new();
            for line in BufReader::new(file).lines() {
                let line = line.map_err(|e| Error::io(path, e))?;
                if !line.trim().is_empty() {
                    texts.push(unescape_text(&line));
                }
            }
            Ok(texts)
        }
    }
}

fn cmd_build_lexicon(a: &BuildLexiconArgs, out: &mut dyn Write) -> Result<()> {
    let labeling = match a.labeling {
        LabelingArg::Emoticon => Labeling::Emoticon,
        LabelingArg::Hashtag => {
            let path = a.seeds.as_ref().ok_or_else(|| {
                Error::InvalidArgument("--seeds is required for hashtag labeling".into())
            })?;
            Labeling::Hashtag(SeedSet::load(path)?)
        }
    };
    let mut filter = if a.keep_function_words {
        CandidateFilter::unfiltered()
    } else {
        CandidateFilter::default()
    };
    filter.max_gap = a.max_gap;
    let params = BuildParams {
        min_count: a.min_count,
        alpha: a.alpha,
        per_message: a.per_message,
        filter,
    };
    let name = a.name.clone().unwrap_or_else(|| {
        a.out.file_stem().map_or_else(
            || "induced".to_string(),
            |s| s.to_string_lossy().into_owned(),
        )
    });
    let corpus: Vec<_> = read_messages(&a.input, a.format)?
        .iter()
        .map(|t| tokenize_message(t))
        .collect();
    let lexicon = build_lexicon(&corpus, &labeling, &params, &name)?;
    write_lexicon(&lexicon, &a.out)?;
    emit(
        out,
        &format!("wrote {} terms to {}\n", lexicon.len(), a.out.display()),
    )
}

fn load_resources(r: &ResourceArgs) -> Result<Resources> {
    let lexicons = r
        .lexicons
        .iter()
        .map(load_polarity_lexicon)
        .collect::<Result<Vec<_>>>()?;
    let clusters = match &r.clusters {
        Some(p) => load_cluster_map(p)?,
        None => ClusterMap::default(),
    };
    Ok(Resources::new(lexicons, clusters))
}

enum Corpus {
    Messages(Vec<LabeledMessage>),
    Terms(Vec<TermInstance>),
}

fn load_corpus(task: Task, path: &Path, format: MessageFormat) -> Result<Corpus> {
    Ok(match task {
        Task::Message => Corpus::Messages(load_message_corpus(path, format.into())?),
        Task::Term => Corpus::Terms(load_term_corpus(path)?),
    })
}

/// Runs `f` with the extractor and items matching the corpus task.
macro_rules! with_task {
    ($corpus:expr, $res:expr, $cfg:expr, |$ext:ident, $items:ident| $body:expr) => {
        match $corpus {
            Corpus::Messages($items) => {
                let $ext = MessageExtractor::new($res, $cfg);
                $body
            }
            Corpus::Terms($items) => {
                let $ext = TermExtractor::new($res, $cfg);
                $body
            }
        }
    };
}

fn cv_report<E: Extractor>(
    ext: &E,
    items: &[E::Item],
    k: usize,
    params: &TrainParams,
) -> Result<String> {
    let features: Vec<_> = items.iter().map(|i| ext.extract_item(i)).collect();
    let labels: Vec<_> = items.iter().map(E::label).collect();
    let scores = cross_validate(&features, &labels, k, params)?;
    let mut text = String::from("fold\tmacro_f\n");
    for (i, s) in scores.iter().enumerate() {
        text.push_str(&format!("{}\t{s:.2}\n", i + 1));
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    text.push_str(&format!("mean\t{mean:.2}\n"));
    Ok(text)
}

fn cmd_train(a: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let params = a.solver.params()?;
    let cfg = a.features.config()?;
    let res = load_resources(&a.resources)?;
    let corpus = load_corpus(a.task.into(), &a.train, a.resources.format)?;
    let (model, cv) = with_task!(corpus, &res, cfg.clone(), |ext, items| {
        let model = evaluation::fit(&ext, &items, &cfg, &params)?;
        let cv =
            a.cv.map(|k| cv_report(&ext, &items, k, &params))
                .transpose()?;
        (model, cv)
    });
    model.save(&a.model)?;
    if let Some(cv) = cv {
        emit(out, &cv)?;
    }
    emit(
        out,
        &format!(
            "trained {} model over {} features, saved to {}\n",
            model.task,
            model.dictionary.len(),
            a.model.display()
        ),
    )
}

fn load_model(a: &PredictArgs) -> Result<LinearModel> {
    match &a.dictionary {
        Some(d) => LinearModel::load_with_dictionary(&a.model, d),
        None => LinearModel::load(&a.model),
    }
}

fn cmd_predict(a: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(a)?;
    let res = load_resources(&a.resources)?;
    let corpus = load_corpus(model.task, &a.input, a.resources.format)?;
    let ids: Vec<String> = match &corpus {
        Corpus::Messages(m) => m.iter().map(|x| x.id.clone()).collect(),
        Corpus::Terms(t) => t.iter().map(|x| x.id.clone()).collect(),
    };
    let labels = with_task!(corpus, &res, model.features.clone(), |ext, items| {
        evaluation::predict(&ext, &model, &items)
    });
    let text: String = ids
        .iter()
        .zip(labels)
        .map(|(id, label)| format!("{id}\t{label}\n"))
        .collect();
    emit(out, &text)
}

fn cmd_evaluate(a: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(a)?;
    let res = load_resources(&a.resources)?;
    let corpus = load_corpus(model.task, &a.input, a.resources.format)?;
    let report = with_task!(corpus, &res, model.features.clone(), |ext, items| {
        evaluation::evaluate(&ext, &model, &items)
    })?;
    emit(
        out,
        &if a.tsv {
            report.key_values()
        } else {
            report.render()
        },
    )
}

fn cmd_ablate(a: &AblateArgs, out: &mut dyn Write) -> Result<()> {
    let task: Task = a.task.into();
    let groups = match &a.groups {
        Some(list) => FeatureGroup::parse_list(list)?,
        None => match task {
            Task::Message => FeatureGroup::MESSAGE.to_vec(),
            Task::Term => FeatureGroup::TERM.to_vec(),
        },
    };
    let params = a.solver.params()?;
    let cfg = a.features.config()?;
    let res = load_resources(&a.resources)?;
    let train = load_corpus(task, &a.train, a.resources.format)?;
    let test = load_corpus(task, &a.test, a.resources.format)?;
    let table = match (train, test) {
        (Corpus::Messages(tr), Corpus::Messages(te)) => run_ablation(
            &MessageExtractor::new(&res, cfg),
            &groups,
            &tr,
            &te,
            &params,
        )?,
        (Corpus::Terms(tr), Corpus::Terms(te)) => {
            run_ablation(&TermExtractor::new(&res, cfg), &groups, &tr, &te, &params)?
        }
        _ => unreachable!("both corpora load with the same task"),
    };
    emit(
        out,
        &if a.tsv {
            table.to_tsv()
        } else {
            table.render()
        },
    )
}
