//! Surface realization: every ordering of a bag of words that admits a
//! linkage.
//!
//! Orderings are built left to right over the distinct tokens in sorted
//! order, so equal tokens are never swapped and candidates come out in
//! lexicographic order. Two prunes cut the search, both sound:
//!
//! * the first word needs a disjunct without left connectors, the last one
//!   a disjunct without right connectors;
//! * every gap between adjacent words must be crossed by some link, so a
//!   word is only appended if some word already placed connects to it or to
//!   a word not yet placed.
//!
//! Whatever survives is checked by the linkage solver.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linkage::solver::{Prepared, Solver};
use crate::linkage::token_disjuncts;
use crate::model::Dictionary;

pub const LEFT_WALL: &str = "LEFT-WALL";
pub const RIGHT_WALL: &str = "RIGHT-WALL";

/// Unordered multiset of word forms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordBag {
    pub tokens: Vec<String>,
    /// Identifies the reference sentence during evaluation.
    pub source: Option<String>,
}

impl WordBag {
    pub fn new<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        WordBag {
            tokens: tokens.into_iter().map(Into::into).collect(),
            source: None,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    /// Stop after this many candidates plus one; `None` enumerates all.
    pub cap: Option<usize>,
    pub max_bag: usize,
    /// Surround each ordering with `LEFT-WALL` / `RIGHT-WALL` when the
    /// dictionary defines them.
    pub walls: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            cap: Some(25),
            max_bag: 10,
            walls: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenerationOutcome {
    None,
    Single,
    Multiple,
    TooMany,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationResult {
    /// Lexicographic, at most `cap` entries.
    pub candidates: Vec<Vec<String>>,
    pub truncated: bool,
    pub outcome: GenerationOutcome,
}

impl GenerationResult {
    fn new(candidates: Vec<Vec<String>>, truncated: bool) -> Self {
        let outcome = match (truncated, candidates.len()) {
            (true, _) => GenerationOutcome::TooMany,
            (false, 0) => GenerationOutcome::None,
            (false, 1) => GenerationOutcome::Single,
            _ => GenerationOutcome::Multiple,
        };
        GenerationResult {
            candidates,
            truncated,
            outcome,
        }
    }

    /// Candidates joined with single spaces.
    pub fn sentences(&self) -> Vec<String> {
        self.candidates.iter().map(|c| c.join(" ")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("no dictionary rules for: {}", .0.join(", "))]
    UnknownWord(Vec<String>),
    #[error("bag of {0} tokens exceeds the limit of {1}")]
    BagTooLarge(usize, usize),
    #[error("empty bag")]
    EmptyBag,
}

/// Outcome of a generation run judged against the sentence the bag came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReferenceClass {
    SingleCorrect,
    MultipleOneCorrect,
    /// Also used for a single candidate that differs from the reference.
    MultipleNoneCorrect,
    NoSentences,
    TooMany,
}

impl ReferenceClass {
    pub const ALL: [ReferenceClass; 5] = [
        ReferenceClass::SingleCorrect,
        ReferenceClass::MultipleOneCorrect,
        ReferenceClass::MultipleNoneCorrect,
        ReferenceClass::NoSentences,
        ReferenceClass::TooMany,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ReferenceClass::SingleCorrect => "Single correct generated sentence",
            ReferenceClass::MultipleOneCorrect => "Multiple sentences with one correct",
            ReferenceClass::MultipleNoneCorrect => "Multiple sentences with none correct",
            ReferenceClass::NoSentences => "No generated sentences",
            ReferenceClass::TooMany => "Too many results",
        }
    }

    pub fn is_correct(self) -> bool {
        matches!(
            self,
            ReferenceClass::SingleCorrect | ReferenceClass::MultipleOneCorrect
        )
    }
}

/// Truncated results are `TooMany` even when they contain the reference.
pub fn classify_against_reference<S: AsRef<str>>(
    result: &GenerationResult,
    reference: &[S],
) -> ReferenceClass {
    if result.truncated {
        return ReferenceClass::TooMany;
    }
    let hit = result.candidates.iter().any(|c| {
        c.len() == reference.len() && c.iter().zip(reference).all(|(a, b)| a == b.as_ref())
    });
    match (result.candidates.len(), hit) {
        (0, _) => ReferenceClass::NoSentences,
        (1, true) => ReferenceClass::SingleCorrect,
        (_, true) => ReferenceClass::MultipleOneCorrect,
        (_, false) => ReferenceClass::MultipleNoneCorrect,
    }
}

pub struct Generator<'d> {
    dict: &'d Dictionary,
    config: GeneratorConfig,
}

impl<'d> Generator<'d> {
    pub fn new(dict: &'d Dictionary, config: GeneratorConfig) -> Self {
        Generator { dict, config }
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn generate(&self, bag: &WordBag) -> Result<GenerationResult, GenerateError> {
        if bag.is_empty() {
            return Err(GenerateError::EmptyBag);
        }
        if bag.len() > self.config.max_bag {
            return Err(GenerateError::BagTooLarge(bag.len(), self.config.max_bag));
        }

        let mut distinct: Vec<&str> = bag.tokens.iter().map(String::as_str).collect();
        distinct.sort_unstable();
        distinct.dedup();
        let mut unknown: Vec<String> = distinct
            .iter()
            .filter(|t| self.dict.lookup(t).is_empty())
            .map(|&t| t.into())
            .collect();
        if !unknown.is_empty() {
            unknown.sort();
            return Err(GenerateError::UnknownWord(unknown));
        }
        let mut counts: Vec<usize> = distinct
            .iter()
            .map(|d| bag.tokens.iter().filter(|t| t == d).count())
            .collect();

        let mut per_token: Vec<_> = distinct
            .iter()
            .map(|t| token_disjuncts(self.dict, t))
            .collect();
        let mut wall = |name: &str| {
            (self.config.walls && !self.dict.lookup(name).is_empty()).then(|| {
                per_token.push(token_disjuncts(self.dict, name));
                counts.push(1);
                per_token.len() - 1
            })
        };
        let left_wall = wall(LEFT_WALL);
        let right_wall = wall(RIGHT_WALL);

        let prep = Prepared::new(per_token, &counts);
        counts.truncate(distinct.len());
        let k = prep.prepared.len();
        let conn: Vec<Vec<bool>> = (0..k)
            .map(|a| (0..k).map(|b| prep.connects(a, b)).collect())
            .collect();
        let can_start = prep
            .prepared
            .iter()
            .map(|ds| ds.iter().any(|d| d.left_ff.is_empty()))
            .collect();
        let can_end = prep
            .prepared
            .iter()
            .map(|ds| ds.iter().any(|d| d.right_ff.is_empty()))
            .collect();

        let mut search = Search {
            prep: &prep,
            conn,
            can_start,
            can_end,
            right_wall,
            counts,
            seq: left_wall.into_iter().collect(),
            offset: usize::from(left_wall.is_some()),
            n: bag.len(),
            limit: self.config.cap.map(|c| c.saturating_add(1)),
            found: Vec::new(),
        };
        search.run();

        let mut truncated = false;
        if let Some(cap) = self.config.cap {
            if search.found.len() > cap {
                search.found.truncate(cap);
                truncated = true;
            }
        }
        let candidates = search
            .found
            .iter()
            .map(|ids| ids.iter().map(|&i| String::from(distinct[i])).collect())
            .collect();
        Ok(GenerationResult::new(candidates, truncated))
    }
}

pub fn generate(
    dict: &Dictionary,
    bag: &WordBag,
    config: &GeneratorConfig,
) -> Result<GenerationResult, GenerateError> {
    Generator::new(dict, config.clone()).generate(bag)
}

struct Search<'p> {
    prep: &'p Prepared,
    conn: Vec<Vec<bool>>,
    can_start: Vec<bool>,
    can_end: Vec<bool>,
    right_wall: Option<usize>,
    /// Remaining copies of each bag token.
    counts: Vec<usize>,
    /// Current prefix, including a left wall.
    seq: Vec<usize>,
    offset: usize,
    n: usize,
    limit: Option<usize>,
    /// Accepted orderings, without walls.
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self) {
        let mut reach = alloc::vec![false; self.conn.len()];
        for &w in &self.seq {
            for (y, r) in reach.iter_mut().enumerate() {
                *r |= self.conn[w][y];
            }
        }
        self.extend(&reach);
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    /// `reach[y]`: some word of the prefix has a right connector matching `y`.
    fn extend(&mut self, reach: &[bool]) {
        let depth = self.seq.len() - self.offset;
        if depth == self.n {
            self.finish();
            return;
        }
        for t in 0..self.counts.len() {
            if self.done() {
                return;
            }
            if self.counts[t] == 0 {
                continue;
            }
            if self.seq.is_empty() {
                if !self.can_start[t] {
                    continue;
                }
            } else {
                let crossable = reach[t]
                    || self.right_wall.is_some_and(|w| reach[w])
                    || (0..self.counts.len()).any(|y| {
                        reach[y] && (self.counts[y] > 1 || (self.counts[y] == 1 && y != t))
                    });
                if !crossable {
                    continue;
                }
            }
            let mut next = reach.to_vec();
            for (y, r) in next.iter_mut().enumerate() {
                *r |= self.conn[t][y];
            }
            self.counts[t] -= 1;
            self.seq.push(t);
            self.extend(&next);
            self.seq.pop();
            self.counts[t] += 1;
        }
    }

    fn finish(&mut self) {
        let last = *self.seq.last().expect("non-empty bag");
        if self.right_wall.is_none() && !self.can_end[last] {
            return;
        }
        let mut full = self.seq.clone();
        full.extend(self.right_wall);
        if Solver::new(self.prep, &full, None).exists() {
            self.found.push(self.seq[self.offset..].to_vec());
        }
    }
}
