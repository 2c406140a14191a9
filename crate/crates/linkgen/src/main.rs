use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linkgen::{evaluate, load_corpus, load_dict, report_json, Error};
use linkgen_core::eval::Normalization;
use linkgen_core::{generate, GenerateError, GenerationOutcome, GeneratorConfig, WordBag};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_EMPTY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "linkgen",
    version,
    about = "Generate sentences from bags of words with a Link Grammar dictionary"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a dictionary and print its size.
    DictInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Print every valid ordering of the given words.
    Generate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gen: GenOpts,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Regenerate each sentence of a corpus from its shuffled words and score the results.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gen: GenOpts,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Compare corpus text case-sensitively.
        #[arg(long)]
        no_lowercase: bool,
        /// Keep sentence-final punctuation as a token.
        #[arg(long)]
        keep_punct: bool,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    dict: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GenOpts {
    /// Candidate limit per bag, or `none`.
    #[arg(long, default_value = "25", value_parser = parse_cap)]
    cap: Cap,
    #[arg(long, default_value_t = 10)]
    max_bag: usize,
    /// Surround orderings with LEFT-WALL/RIGHT-WALL if the dictionary has them.
    #[arg(long)]
    walls: bool,
}

#[derive(Clone, Copy)]
struct Cap(Option<usize>);

fn parse_cap(s: &str) -> Result<Cap, String> {
    match s {
        "none" => Ok(Cap(None)),
        _ => s.parse().map(|n| Cap(Some(n))).map_err(|e| format!("{e}")),
    }
}

impl GenOpts {
    fn config(&self) -> GeneratorConfig {
        GeneratorConfig {
            cap: self.cap.0,
            max_bag: self.max_bag,
            walls: self.walls,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn load(common: &Common) -> Result<linkgen_core::Dictionary, Error> {
    let start = Instant::now();
    let (dict, report) = load_dict(&common.dict)?;
    eprintln!(
        "loaded {} ({} rules, {} word forms) in {:.2?}",
        common.dict.display(),
        report.rule_count,
        report.word_form_count,
        start.elapsed()
    );
    Ok(dict)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::DictInfo { common } => {
            let start = Instant::now();
            let (_, report) = load_dict(&common.dict)?;
            for w in &report.warnings {
                eprintln!("warning: {}: {}", w.location, w.message);
            }
            eprintln!("loaded in {:.2?}", start.elapsed());
            match common.format {
                Format::Text => println!(
                    "rules: {}, word forms: {}, phrases: {}, macros: {}, warnings: {}",
                    report.rule_count,
                    report.word_form_count,
                    report.phrase_count,
                    report.macro_count,
                    report.warnings.len()
                ),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                ),
            }
            Ok(0)
        }
        Command::Generate { common, gen, words } => {
            let dict = load(&common)?;
            let result = match generate(&dict, &WordBag::new(words), &gen.config()) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(match e {
                        GenerateError::UnknownWord(_)
                        | GenerateError::BagTooLarge(..)
                        | GenerateError::EmptyBag => EXIT_USAGE,
                    });
                }
            };
            match common.format {
                Format::Text => {
                    for s in result.sentences() {
                        println!("{s}");
                    }
                    let outcome = serde_json::to_value(result.outcome).expect("serializable");
                    eprintln!(
                        "outcome: {}, {} candidate(s){}",
                        outcome.as_str().unwrap_or_default(),
                        result.candidates.len(),
                        if result.truncated { ", truncated" } else { "" }
                    );
                }
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&result).expect("serializable")
                ),
            }
            Ok(if result.outcome == GenerationOutcome::None {
                EXIT_EMPTY
            } else {
                0
            })
        }
        Command::Evaluate {
            common,
            gen,
            corpus,
            seed,
            no_lowercase,
            keep_punct,
            jobs,
        } => {
            let normalization = Normalization {
                lowercase: !no_lowercase,
                keep_punct,
            };
            let corpus = load_corpus(&corpus, normalization)?;
            let dict = load(&common)?;
            if corpus.is_empty() {
                eprintln!("warning: corpus has no sentences");
            }
            eprintln!("evaluating {} sentences", corpus.len());
            let start = Instant::now();
            let report = evaluate(&dict, &corpus, seed, gen.config(), jobs)?;
            for s in &report.sentences {
                if let Some(e) = &s.error {
                    eprintln!("skipped sentence {}: {e}", s.index + 1);
                }
            }
            eprintln!("done in {:.2?}", start.elapsed());
            match common.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => println!("{}", report_json(&report)),
            }
            Ok(0)
        }
    }
}
