//! File access and report formats for `linkgen-core`.

use std::fs;
use std::path::{Path, PathBuf};

use linkgen_core::eval::{
    evaluate_sentence, Corpus, EvalConfig, EvalReport, Normalization, TableRow,
};
use linkgen_core::{
    make_dict, DictSource, Dictionary, Generator, GeneratorConfig, IncludeResolver, LoadError,
    LoadReport,
};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {what} {path}: {source}")]
    Read {
        what: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("cannot start worker threads: {0}")]
    Threads(#[from] rayon::ThreadPoolBuildError),
}

/// Resolves `/words/...` style includes against a dictionary's directory
/// and, failing that, each of its ancestors.
pub struct FsResolver {
    roots: Vec<PathBuf>,
}

impl FsResolver {
    pub fn for_dict(dict_path: &Path) -> Self {
        let dir = dict_path.parent().unwrap_or(Path::new("."));
        FsResolver {
            roots: dir.ancestors().map(Path::to_path_buf).collect(),
        }
    }
}

impl IncludeResolver for FsResolver {
    fn resolve(&self, path: &str) -> Option<String> {
        let rel = path.trim_start_matches('/');
        self.roots
            .iter()
            .map(|r| r.join(rel))
            .find(|p| p.is_file())
            .and_then(|p| fs::read_to_string(p).ok())
    }
}

fn read(what: &'static str, path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Read {
        what,
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_dict(path: &Path) -> Result<(Dictionary, LoadReport), Error> {
    let text = read("dictionary", path)?;
    let resolver = FsResolver::for_dict(path);
    let source = DictSource {
        name: path.display().to_string(),
        main_text: &text,
        include_resolver: &resolver,
        language_tag: "en".into(),
    };
    Ok(make_dict(&source)?)
}

pub fn load_corpus(path: &Path, normalization: Normalization) -> Result<Corpus, Error> {
    let text = read("corpus", path)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Corpus::parse(name, &text, normalization))
}

/// Evaluates sentences in parallel; the report is identical to a
/// sequential run. `jobs` of `None` uses every core.
pub fn evaluate(
    dict: &Dictionary,
    corpus: &Corpus,
    seed: u64,
    generator: GeneratorConfig,
    jobs: Option<usize>,
) -> Result<EvalReport, Error> {
    let config = EvalConfig {
        seed,
        generator: generator.clone(),
        normalization: corpus.normalization,
    };
    let g = Generator::new(dict, generator);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()?;
    let sentences = pool.install(|| {
        corpus
            .sentences
            .par_iter()
            .enumerate()
            .map(|(i, s)| evaluate_sentence(&g, seed, i, s))
            .collect()
    });
    Ok(EvalReport::assemble(corpus, config, sentences))
}

#[derive(Serialize)]
struct JsonReport<'a> {
    table: Vec<TableRow>,
    #[serde(flatten)]
    report: &'a EvalReport,
}

/// Pretty JSON with the summary table first; stable across runs.
pub fn report_json(report: &EvalReport) -> String {
    let doc = JsonReport {
        table: report.table(),
        report,
    };
    serde_json::to_string_pretty(&doc).expect("reports always serialize")
}

pub fn parse_report_json(text: &str) -> serde_json::Result<EvalReport> {
    serde_json::from_str(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use linkgen_core::eval::evaluate_corpus;

    #[test]
    fn includes_resolve_against_ancestors() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path().join("words")).unwrap();
        fs::create_dir_all(dir.path().join("en")).unwrap();
        fs::write(dir.path().join("words/nouns"), "dog cat\n").unwrap();
        fs::write(
            dir.path().join("en/main.dict"),
            "/words/nouns: S+;\nruns: S-;\n",
        )
        .unwrap();
        let (d, r) = load_dict(&dir.path().join("en/main.dict")).unwrap();
        assert_eq!(r.word_form_count, 3);
        assert_eq!(d.lookup("cat").len(), 1);
    }

    #[test]
    fn missing_dictionary_is_a_read_error() {
        assert!(matches!(
            load_dict(Path::new("/nonexistent/x.dict")),
            Err(Error::Read { .. })
        ));
    }

    #[test]
    fn parallel_equals_sequential_and_json_round_trips() {
        let d = make_dict(&DictSource::from_text(
            "t.dict",
            "the a: D+;\ncat mouse: D- & (S+ or O-);\ncaught: S- & O+;",
        ))
        .unwrap()
        .0;
        let corpus = Corpus::parse(
            "c",
            "The cat caught a mouse.\nA mouse caught the cat.\nthe cat\n",
            Normalization::default(),
        );
        let seq = evaluate_corpus(&d, &corpus, 9, GeneratorConfig::default());
        let par = evaluate(&d, &corpus, 9, GeneratorConfig::default(), Some(3)).unwrap();
        assert_eq!(seq, par);
        let json = report_json(&par);
        assert_eq!(parse_report_json(&json).unwrap(), par);
        assert!(json.contains("\"Average External Similarity\""));
    }
}
