use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sentikit::corpus::{
    escape_text, write_lexicon, LabeledMessage, Lexicon, LexiconOrigin, TermInstance,
};
use sentikit::evaluation;
use sentikit::features::{MessageExtractor, Resources};
use sentikit::synth::{planted_messages, planted_terms, seed_hashtag_collection, SynthConfig};
use sentikit::LinearModel;
use tempfile::TempDir;

fn sentikit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sentikit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_messages(dir: &Path, name: &str, items: &[LabeledMessage]) -> PathBuf {
    let text: String = items
        .iter()
        .map(|m| format!("{}\t{}\t{}\n", m.id, m.label, escape_text(&m.text)))
        .collect();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn write_terms(dir: &Path, name: &str, items: &[TermInstance]) -> PathBuf {
    let text: String = items
        .iter()
        .map(|t| {
            format!(
                "{}\t{}\t{}\t{}\t{}\n",
                t.id,
                t.span.0,
                t.span.1,
                t.label,
                escape_text(&t.text)
            )
        })
        .collect();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

struct Fixture {
    dir: TempDir,
    train: PathBuf,
    test: PathBuf,
    lexicon: PathBuf,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let split = planted_messages(300, &SynthConfig::default(), 11);
    let train = write_messages(dir.path(), "train.tsv", &split.train);
    let test = write_messages(dir.path(), "test.tsv", &split.test);
    let lexicon = dir.path().join("planted.lex");
    write_lexicon(&split.lexicon, &lexicon).unwrap();
    Fixture {
        dir,
        train,
        test,
        lexicon,
    }
}

impl Fixture {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn train_model(&self, name: &str, extra: &[&str]) -> (PathBuf, Output) {
        let model = self.path(name);
        let mut args = vec![
            "train",
            "--train",
            path_str(&self.train),
            "--model",
            path_str(&model),
            "--lexicon",
            path_str(&self.lexicon),
            "--c",
            "0.5",
        ];
        args.extend_from_slice(extra);
        let out = sentikit(&args);
        (model, out)
    }
}

#[test]
fn help_exits_zero() {
    let o = sentikit(&["--help"]);
    assert!(o.status.success());
    for cmd in ["build-lexicon", "train", "predict", "evaluate", "ablate"] {
        assert!(stdout(&o).contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn build_lexicon_from_seed_hashtags() {
    let dir = TempDir::new().unwrap();
    let split = planted_messages(10, &SynthConfig::default(), 1);
    let (texts, _) = seed_hashtag_collection(&split.vocabulary, 400, 2).unwrap();
    let input = dir.path().join("tweets.txt");
    fs::write(&input, texts.join("\n")).unwrap();
    let seeds = dir.path().join("seeds.tsv");
    fs::write(&seeds, "#happy\tpositive\n#love\tpositive\n#great\tpositive\n#excited\tpositive\n#sad\tnegative\n#angry\tnegative\n#awful\tnegative\n#fail\tnegative\n").unwrap();
    let out = dir.path().join("induced.lex");
    let o = sentikit(&[
        "build-lexicon",
        "--input",
        path_str(&input),
        "--seeds",
        path_str(&seeds),
        "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("wrote "));
    let (lex, _) = Lexicon::from_reader(fs::read(&out).unwrap().as_slice(), "x").unwrap();
    assert_eq!(lex.origin, LexiconOrigin::Induced);
    assert_eq!(lex.name, "induced");
    let good = &split.vocabulary.positive;
    let scored: Vec<f64> = good
        .iter()
        .filter_map(|w| {
            lex.score(&format!("uni:{w}"), "positive")
                .or_else(|| lex.score(w, "positive"))
        })
        .collect();
    assert!(!scored.is_empty());
    assert!(scored.iter().sum::<f64>() > 0.0);
}

#[test]
fn missing_input_is_a_usage_error() {
    let o = sentikit(&["build-lexicon", "--out", "/tmp/never.lex"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--input"));
}

#[test]
fn corpus_without_pseudo_labels_fails() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("plain.txt");
    fs::write(&input, "nothing here\njust words here\n").unwrap();
    let out = dir.path().join("x.lex");
    let o = sentikit(&[
        "build-lexicon",
        "--input",
        path_str(&input),
        "--labeling",
        "emoticon",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no labeled messages"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn train_then_predict() {
    let f = fixture();
    let (model, o) = f.train_model("m.model", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(model.exists());
    let o = sentikit(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&f.test),
        "--lexicon",
        path_str(&f.lexicon),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 90);
    for line in &lines {
        let (_, label) = line.split_once('\t').unwrap();
        assert!(
            ["positive", "negative", "neutral"].contains(&label),
            "{line}"
        );
    }
}

#[test]
fn cross_validation_is_reproducible() {
    let f = fixture();
    let (m1, a) = f.train_model("cv.model", &["--cv", "10", "--seed", "7"]);
    let first_model = fs::read(&m1).unwrap();
    let (m2, b) = f.train_model("cv.model", &["--cv", "10", "--seed", "7"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(first_model, fs::read(&m2).unwrap());
    let text = stdout(&a);
    assert!(text.starts_with("fold\tmacro_f\n"));
    assert_eq!(
        text.lines()
            .filter(|l| l.split('\t').next().unwrap().parse::<usize>().is_ok())
            .count(),
        10
    );
    assert!(text.contains("\nmean\t"));
}

#[test]
fn missing_class_is_reported() {
    let f = fixture();
    let split = planted_messages(300, &SynthConfig::default(), 11);
    let polar: Vec<_> = split
        .train
        .into_iter()
        .filter(|m| m.label != sentikit::Polarity::Neutral)
        .collect();
    let train = write_messages(f.dir.path(), "polar.tsv", &polar);
    let o = sentikit(&[
        "train",
        "--train",
        path_str(&train),
        "--model",
        path_str(&f.path("p.model")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("neutral"), "{}", stderr(&o));
}

#[test]
fn evaluate_matches_library() {
    let f = fixture();
    let (model_path, o) = f.train_model("e.model", &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = sentikit(&[
        "evaluate",
        "--model",
        path_str(&model_path),
        "--input",
        path_str(&f.test),
        "--lexicon",
        path_str(&f.lexicon),
        "--tsv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));

    let model = LinearModel::load(&model_path).unwrap();
    let lex = sentikit::corpus::load_polarity_lexicon(&f.lexicon).unwrap();
    let res = Resources::new(vec![lex], Default::default());
    let ext = MessageExtractor::new(&res, model.features.clone());
    let test = sentikit::corpus::load_message_corpus(&f.test, sentikit::corpus::CorpusFormat::Tsv)
        .unwrap();
    let report = evaluation::evaluate(&ext, &model, &test).unwrap();
    assert_eq!(stdout(&o), report.key_values());

    let human = sentikit(&[
        "evaluate",
        "--model",
        path_str(&model_path),
        "--input",
        path_str(&f.test),
        "--lexicon",
        path_str(&f.lexicon),
    ]);
    assert_eq!(stdout(&human), report.render());
}

#[test]
fn ablate_selected_groups() {
    let f = fixture();
    let o = sentikit(&[
        "ablate",
        "--train",
        path_str(&f.train),
        "--test",
        path_str(&f.test),
        "--lexicon",
        path_str(&f.lexicon),
        "--groups",
        "lexicons,ngrams",
        "--c",
        "0.5",
        "--tsv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "group\tmacro_f\tdelta");
    assert_eq!(rows.len(), 4, "{text}");
    assert!(rows[1].starts_with("all\t"));
    assert!(rows[2].starts_with("lexicons\t"), "{text}");
    assert!(rows[3].starts_with("ngrams\t"));
}

#[test]
fn unknown_group_is_rejected() {
    let f = fixture();
    let o = sentikit(&[
        "ablate",
        "--train",
        path_str(&f.train),
        "--test",
        path_str(&f.test),
        "--groups",
        "bogus",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn dictionary_mismatch_is_fatal() {
    let f = fixture();
    let (a, o) = f.train_model("a.model", &[]);
    assert!(o.status.success());
    let other = planted_messages(200, &SynthConfig::default(), 99);
    let other_train = write_messages(f.dir.path(), "other.tsv", &other.train);
    let b = f.path("b.model");
    let o = sentikit(&[
        "train",
        "--train",
        path_str(&other_train),
        "--model",
        path_str(&b),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let wrong = format!("{}.dict", b.display());
    let o = sentikit(&[
        "evaluate",
        "--model",
        path_str(&a),
        "--dictionary",
        &wrong,
        "--input",
        path_str(&f.test),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dictionary"), "{}", stderr(&o));
}

#[test]
fn term_task_round_trip() {
    let dir = TempDir::new().unwrap();
    let split = planted_terms(300, &SynthConfig::default(), 4);
    let train = write_terms(dir.path(), "train.tsv", &split.train);
    let test = write_terms(dir.path(), "test.tsv", &split.test);
    let model = dir.path().join("t.model");
    let o = sentikit(&[
        "train",
        "--task",
        "term",
        "--train",
        path_str(&train),
        "--model",
        path_str(&model),
        "--c",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("trained term model"));
    let o = sentikit(&[
        "evaluate",
        "--model",
        path_str(&model),
        "--input",
        path_str(&test),
        "--tsv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("macro_f"));
    let o = sentikit(&[
        "ablate",
        "--task",
        "term",
        "--train",
        path_str(&train),
        "--test",
        path_str(&test),
        "--groups",
        "target,context",
        "--c",
        "0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("all")).count(),
        3
    );
}
