//! Corpus evaluation: shuffle each reference sentence, regenerate it from
//! the bag of its tokens, and score the candidates against the reference.

mod corpus;
mod metrics;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use corpus::{Corpus, Normalization};
pub use metrics::{bleu2, levenshtein, ter, ter_edits, wer, MetricError};

use crate::generator::{
    classify_against_reference, Generator, GeneratorConfig, ReferenceClass, WordBag,
};

/// Settings echoed into every report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub seed: u64,
    pub generator: GeneratorConfig,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceReport {
    pub index: usize,
    pub reference: String,
    /// The bag handed to the generator, in shuffled order.
    pub shuffled: Vec<String>,
    /// `None` when the sentence was skipped.
    pub class: Option<ReferenceClass>,
    pub candidates: Vec<String>,
    pub truncated: bool,
    pub bleu2: Option<f64>,
    pub wer: Option<f64>,
    pub ter: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tallies {
    pub single_correct: usize,
    pub multiple_one_correct: usize,
    pub multiple_none_correct: usize,
    pub no_sentences: usize,
    pub too_many: usize,
}

impl Tallies {
    pub fn get(&self, class: ReferenceClass) -> usize {
        match class {
            ReferenceClass::SingleCorrect => self.single_correct,
            ReferenceClass::MultipleOneCorrect => self.multiple_one_correct,
            ReferenceClass::MultipleNoneCorrect => self.multiple_none_correct,
            ReferenceClass::NoSentences => self.no_sentences,
            ReferenceClass::TooMany => self.too_many,
        }
    }

    fn bump(&mut self, class: ReferenceClass) {
        *match class {
            ReferenceClass::SingleCorrect => &mut self.single_correct,
            ReferenceClass::MultipleOneCorrect => &mut self.multiple_one_correct,
            ReferenceClass::MultipleNoneCorrect => &mut self.multiple_none_correct,
            ReferenceClass::NoSentences => &mut self.no_sentences,
            ReferenceClass::TooMany => &mut self.too_many,
        } += 1;
    }

    pub fn total(&self) -> usize {
        ReferenceClass::ALL.iter().map(|&c| self.get(c)).sum()
    }
}

/// A summary table cell: a count out of the evaluated sentences, or a score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Count(usize),
    Score(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub value: Option<Cell>,
}

pub const ACCURACY: &str = "Accuracy";
pub const AVG_BLEU: &str = "Average BLEU (Bigram)";
pub const AVG_WER: &str = "Average WER";
pub const AVG_TER: &str = "Average TER";
pub const AVG_EXTERNAL: &str = "Average External Similarity";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub corpus: String,
    pub config: EvalConfig,
    pub sentence_count: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub tallies: Tallies,
    /// Share of evaluated sentences whose reference was regenerated.
    pub accuracy: f64,
    pub avg_bleu2: f64,
    pub avg_wer: f64,
    pub avg_ter: f64,
    /// Filled in by callers that have an external sentence-similarity model.
    pub external_similarity: Option<f64>,
    pub sentences: Vec<SentenceReport>,
}

impl EvalReport {
    /// Collects per-sentence results, which must be in corpus order.
    pub fn assemble(corpus: &Corpus, config: EvalConfig, sentences: Vec<SentenceReport>) -> Self {
        let mut tallies = Tallies::default();
        let (mut bleu, mut w, mut t) = (0.0, 0.0, 0.0);
        for s in &sentences {
            if let Some(c) = s.class {
                tallies.bump(c);
                bleu += s.bleu2.unwrap_or(0.0);
                w += s.wer.unwrap_or(0.0);
                t += s.ter.unwrap_or(0.0);
            }
        }
        let evaluated = tallies.total();
        let mean = |x: f64| {
            if evaluated == 0 {
                0.0
            } else {
                x / evaluated as f64
            }
        };
        let correct = (tallies.single_correct + tallies.multiple_one_correct) as f64;
        EvalReport {
            corpus: corpus.name.clone(),
            config,
            sentence_count: sentences.len(),
            evaluated,
            skipped: sentences.len() - evaluated,
            tallies,
            accuracy: mean(correct),
            avg_bleu2: mean(bleu),
            avg_wer: mean(w),
            avg_ter: mean(t),
            external_similarity: None,
            sentences,
        }
    }

    /// The summary rows, labelled as in the usual results tables.
    pub fn table(&self) -> Vec<TableRow> {
        let mut rows: Vec<TableRow> = ReferenceClass::ALL
            .iter()
            .map(|&c| TableRow {
                label: c.label().to_string(),
                value: Some(Cell::Count(self.tallies.get(c))),
            })
            .collect();
        for (label, v) in [
            (ACCURACY, Some(self.accuracy)),
            (AVG_BLEU, Some(self.avg_bleu2)),
            (AVG_WER, Some(self.avg_wer)),
            (AVG_TER, Some(self.avg_ter)),
            (AVG_EXTERNAL, self.external_similarity),
        ] {
            rows.push(TableRow {
                label: label.to_string(),
                value: v.map(Cell::Score),
            });
        }
        rows
    }

    /// Plain-text rendering of [`table`](Self::table).
    pub fn render_text(&self) -> String {
        let rows = self.table();
        let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
        let mut out = format!(
            "corpus: {} ({} sentences, {} evaluated, {} skipped, seed {})\n",
            self.corpus, self.sentence_count, self.evaluated, self.skipped, self.config.seed
        );
        for r in rows {
            let value = match r.value {
                Some(Cell::Count(n)) => format!("{n}/{}", self.evaluated),
                Some(Cell::Score(x)) => format!("{x:.3}"),
                None => "n/a".to_string(),
            };
            out.push_str(&format!("{:<width$}  {value}\n", r.label));
        }
        out
    }
}

/// The shuffled bag for sentence `index`; depends only on the seed and the
/// index, so sentences can be evaluated in any order.
pub fn shuffled_bag(tokens: &[String], seed: u64, index: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut bag = tokens.to_vec();
    bag.shuffle(&mut rng);
    bag
}

/// Regenerates one corpus sentence and scores the result.
///
/// Metrics average over every candidate; with no candidates they take
/// their worst values (BLEU 0, WER 1, TER 1).
pub fn evaluate_sentence(
    generator: &Generator<'_>,
    seed: u64,
    index: usize,
    reference: &[String],
) -> SentenceReport {
    let shuffled = shuffled_bag(reference, seed, index);
    let mut report = SentenceReport {
        index,
        reference: reference.join(" "),
        shuffled: shuffled.clone(),
        class: None,
        candidates: Vec::new(),
        truncated: false,
        bleu2: None,
        wer: None,
        ter: None,
        error: None,
    };
    let mut bag = WordBag::new(shuffled);
    bag.source = Some(format!("{index}"));
    let result = match generator.generate(&bag) {
        Ok(r) => r,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.class = Some(classify_against_reference(&result, reference));
    report.truncated = result.truncated;
    report.candidates = result.sentences();
    if result.candidates.is_empty() {
        report.bleu2 = Some(0.0);
        report.wer = Some(1.0);
        report.ter = Some(1.0);
    } else {
        let n = result.candidates.len() as f64;
        let (mut b, mut w, mut t) = (0.0, 0.0, 0.0);
        for c in &result.candidates {
            // both sides are non-empty, so the metrics cannot fail
            b += bleu2(c, reference).unwrap_or(0.0);
            w += wer(c, reference).unwrap_or(1.0);
            t += ter(c, reference).unwrap_or(1.0);
        }
        report.bleu2 = Some(b / n);
        report.wer = Some(w / n);
        report.ter = Some(t / n);
    }
    report
}

/// Evaluates every sentence of `corpus` in order.
pub fn evaluate_corpus(
    dict: &crate::model::Dictionary,
    corpus: &Corpus,
    seed: u64,
    generator: GeneratorConfig,
) -> EvalReport {
    let config = EvalConfig {
        seed,
        generator: generator.clone(),
        normalization: corpus.normalization,
    };
    let g = Generator::new(dict, generator);
    let sentences = corpus
        .sentences
        .iter()
        .enumerate()
        .map(|(i, s)| evaluate_sentence(&g, seed, i, s))
        .collect();
    EvalReport::assemble(corpus, config, sentences)
}
