use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Cleanup applied to every corpus line before it is split into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub lowercase: bool,
    /// Keep sentence-final `.`, `!` and `?`.
    pub keep_punct: bool,
}

impl Default for Normalization {
    fn default() -> Self {
        Normalization {
            lowercase: true,
            keep_punct: false,
        }
    }
}

impl Normalization {
    pub fn apply(&self, line: &str) -> Vec<String> {
        let mut tokens: Vec<String> = line
            .split_whitespace()
            .map(|w| {
                if self.lowercase {
                    w.to_lowercase()
                } else {
                    w.to_string()
                }
            })
            .collect();
        if !self.keep_punct {
            if let Some(last) = tokens.last_mut() {
                let trimmed = last.trim_end_matches(['.', '!', '?']).len();
                last.truncate(trimmed);
                if last.is_empty() {
                    tokens.pop();
                }
            }
        }
        tokens
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    /// One token list per sentence, never empty.
    pub sentences: Vec<Vec<String>>,
    pub normalization: Normalization,
}

impl Corpus {
    /// One sentence per line; blank lines, and lines left empty by
    /// normalization, are dropped.
    pub fn parse(name: impl Into<String>, text: &str, normalization: Normalization) -> Self {
        let sentences = text
            .lines()
            .map(|l| normalization.apply(l))
            .filter(|s| !s.is_empty())
            .collect();
        Corpus {
            name: name.into(),
            sentences,
            normalization,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}
