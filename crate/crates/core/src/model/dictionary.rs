use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::expression::{Disjunct, Expression};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SourceLocation {
    pub file: String,
    pub line: u32,
}

impl core::fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

/// A connector expression shared by a cluster of words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub expression: Expression,
    /// Cached expansion of `expression`.
    pub disjuncts: Vec<Disjunct>,
    pub words: Vec<String>,
    pub origin: SourceLocation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictStats {
    pub rule_count: usize,
    pub word_form_count: usize,
    pub phrase_count: usize,
    pub macro_count: usize,
}

/// Word forms and multi-word phrases mapped to their rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dictionary {
    language: String,
    rules: Vec<Rule>,
    words: BTreeMap<String, Vec<usize>>,
    phrases: BTreeMap<String, Vec<usize>>,
    macros: BTreeMap<String, Expression>,
    // lowercased base form -> full forms (words first, then phrases)
    base_index: BTreeMap<String, Vec<String>>,
}

/// Splits `is.v` into (`is`, `Some("v")`). A trailing dot or a dot with
/// nothing before it is part of the word.
pub fn split_subscript(form: &str) -> (&str, Option<&str>) {
    match form.rfind('.') {
        Some(i) if i > 0 && i + 1 < form.len() => {
            let sub = &form[i + 1..];
            if sub.chars().all(|c| c.is_ascii_alphanumeric()) {
                (&form[..i], Some(sub))
            } else {
                (form, None)
            }
        }
        _ => (form, None),
    }
}

/// Multi-word phrases are written with underscores, e.g. `ice_cream`.
pub fn is_phrase(form: &str) -> bool {
    form.len() > 1 && form.contains('_')
}

impl Dictionary {
    pub fn new(language: impl Into<String>) -> Self {
        Dictionary {
            language: language.into(),
            ..Default::default()
        }
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn macros(&self) -> &BTreeMap<String, Expression> {
        &self.macros
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, Vec<&Rule>)> {
        self.words
            .iter()
            .map(|(w, ids)| (w.as_str(), ids.iter().map(|&i| &self.rules[i]).collect()))
    }

    pub fn phrases(&self) -> impl Iterator<Item = (&str, Vec<&Rule>)> {
        self.phrases
            .iter()
            .map(|(w, ids)| (w.as_str(), ids.iter().map(|&i| &self.rules[i]).collect()))
    }

    pub fn stats(&self) -> DictStats {
        DictStats {
            rule_count: self.rules.len(),
            word_form_count: self.words.len() + self.phrases.len(),
            phrase_count: self.phrases.len(),
            macro_count: self.macros.len(),
        }
    }

    /// Rules stored under exactly this form (no normalization).
    pub fn entry(&self, form: &str) -> Vec<&Rule> {
        self.words
            .get(form)
            .or_else(|| self.phrases.get(form))
            .map(|ids| ids.iter().map(|&i| &self.rules[i]).collect())
            .unwrap_or_default()
    }

    pub fn contains_form(&self, form: &str) -> bool {
        self.words.contains_key(form) || self.phrases.contains_key(form)
    }

    /// All rules for `token`, across every subscripted sense of it.
    ///
    /// Matching is case-insensitive, but if some entry matches with exact
    /// case only the exact-case entries are returned.
    pub fn lookup(&self, token: &str) -> Vec<&Rule> {
        let lowered = token.to_lowercase();
        let mut forms: Vec<&str> = Vec::new();
        if let Some(list) = self.base_index.get(&lowered) {
            forms.extend(list.iter().map(String::as_str));
        }
        if split_subscript(token).1.is_some() {
            // token already carries a subscript: match the full form too
            let (base, _) = split_subscript(token);
            if let Some(list) = self.base_index.get(&base.to_lowercase()) {
                forms.extend(
                    list.iter()
                        .map(String::as_str)
                        .filter(|f| f.to_lowercase() == lowered),
                );
            }
        }
        let exact: Vec<&str> = forms
            .iter()
            .copied()
            .filter(|f| *f == token || split_subscript(f).0 == token)
            .collect();
        if !exact.is_empty() {
            forms = exact;
        }
        let mut ids: Vec<usize> = Vec::new();
        for form in forms {
            let list = self.words.get(form).or_else(|| self.phrases.get(form));
            for &id in list.into_iter().flatten() {
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
        }
        ids.into_iter().map(|i| &self.rules[i]).collect()
    }

    pub(crate) fn define_macro(&mut self, name: String, body: Expression) -> Option<Expression> {
        self.macros.insert(name, body)
    }

    pub(crate) fn push_rule(&mut self, rule: Rule) -> usize {
        self.rules.push(rule);
        self.rules.len() - 1
    }

    /// Records `form` as governed by rule `id`.
    pub(crate) fn assign(&mut self, form: &str, id: usize) {
        let table = if is_phrase(form) {
            &mut self.phrases
        } else {
            &mut self.words
        };
        let ids = table.entry(form.into()).or_default();
        if ids.contains(&id) {
            return;
        }
        let fresh = ids.is_empty();
        ids.push(id);
        if !self.rules[id].words.iter().any(|w| w == form) {
            self.rules[id].words.push(form.into());
        }
        if fresh {
            let base = split_subscript(form).0.to_lowercase();
            self.base_index.entry(base).or_default().push(form.into());
        }
    }

    /// Debug dump in dictionary source syntax; reloading it reproduces the
    /// per-word disjunct sets.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            if rule.words.is_empty() {
                continue;
            }
            let _ = writeln!(out, "% {}", rule.origin);
            for (i, w) in rule.words.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "\"{w}\"");
            }
            let _ = writeln!(out, ":\n  {};", rule.expression);
        }
        out
    }
}
