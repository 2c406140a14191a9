//! Reads Link Grammar dictionary source text into a [`Dictionary`].
//!
//! Macro definitions (`<name>: expr;`) must precede their use. Entry
//! statements assign their macro-free expression to every listed word and to
//! every word of each listed word-list file. Forms containing `_` are stored
//! as phrases.

mod lexer;
mod parser;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use lexer::{tokenize_dict, LexError, Token, TokenKind};
pub use parser::{parse_expression, parse_statements, EntryTarget, ParseError, Statement};

use crate::model::{
    expand_disjuncts, substitute_macros, Dictionary, Expression, MacroError, Rule, SourceLocation,
};

/// Supplies the text of word-list files named in entries.
pub trait IncludeResolver {
    fn resolve(&self, path: &str) -> Option<String>;
}

impl IncludeResolver for BTreeMap<String, String> {
    fn resolve(&self, path: &str) -> Option<String> {
        self.get(path).cloned()
    }
}

/// Resolver for sources without includes.
pub struct NoIncludes;

impl IncludeResolver for NoIncludes {
    fn resolve(&self, _path: &str) -> Option<String> {
        None
    }
}

pub struct DictSource<'a> {
    /// Label used in diagnostics, usually the file name.
    pub name: String,
    pub main_text: &'a str,
    pub include_resolver: &'a dyn IncludeResolver,
    pub language_tag: String,
}

impl<'a> DictSource<'a> {
    pub fn from_text(name: impl Into<String>, main_text: &'a str) -> Self {
        DictSource {
            name: name.into(),
            main_text,
            include_resolver: &NoIncludes,
            language_tag: "en".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadWarning {
    pub location: SourceLocation,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub rule_count: usize,
    pub word_form_count: usize,
    pub phrase_count: usize,
    pub macro_count: usize,
    pub warnings: Vec<LoadWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("{file}:{source}")]
    Lex { file: String, source: LexError },
    #[error("{file}:{source}")]
    Parse { file: String, source: ParseError },
    #[error("{location}: {source}")]
    Macro {
        location: SourceLocation,
        source: MacroError,
    },
    #[error("{location}: cannot resolve include `{path}`")]
    MissingInclude {
        location: SourceLocation,
        path: String,
    },
}

/// Entries in some dictionaries that configure the parser rather than
/// define words.
const SETTING_ENTRIES: &[&str] = &["ANDABLE-CONNECTORS", "UNLIMITED-CONNECTORS"];

fn is_setting(targets: &[EntryTarget]) -> bool {
    targets.iter().all(|t| match t {
        EntryTarget::Word(w) => {
            SETTING_ENTRIES.contains(&w.as_str()) || w.starts_with("LENGTH-LIMIT-")
        }
        EntryTarget::File(_) => false,
    })
}

/// Words listed in a word-list file: whitespace separated, `%` comments.
pub fn words_in_list(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('%').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
}

/// Builds a dictionary from source text.
pub fn make_dict(source: &DictSource<'_>) -> Result<(Dictionary, LoadReport), LoadError> {
    let file = source.name.clone();
    let tokens = tokenize_dict(source.main_text).map_err(|e| LoadError::Lex {
        file: file.clone(),
        source: e,
    })?;
    let statements = parse_statements(&tokens).map_err(|e| LoadError::Parse {
        file: file.clone(),
        source: e,
    })?;

    let mut dict = Dictionary::new(source.language_tag.clone());
    let mut warnings = Vec::new();
    let at = |line: u32| SourceLocation {
        file: file.clone(),
        line,
    };

    for st in statements {
        match st {
            Statement::Directive { text, line } => warnings.push(LoadWarning {
                location: at(line),
                message: format!("skipped unsupported directive `{text}`"),
            }),
            Statement::Macro { name, body, line } => {
                let mut table = dict.macros().clone();
                if table.insert(name.clone(), body).is_some() {
                    warnings.push(LoadWarning {
                        location: at(line),
                        message: format!("macro <{name}> redefined"),
                    });
                }
                let resolved = substitute_macros(&Expression::Macro(name.clone()), &table)
                    .map_err(|e| LoadError::Macro {
                        location: at(line),
                        source: e,
                    })?;
                dict.define_macro(name, resolved);
            }
            Statement::Entry {
                targets,
                body,
                line,
            } => {
                if is_setting(&targets) {
                    warnings.push(LoadWarning {
                        location: at(line),
                        message: "skipped parser setting entry".to_string(),
                    });
                    continue;
                }
                let expression =
                    substitute_macros(&body, dict.macros()).map_err(|e| LoadError::Macro {
                        location: at(line),
                        source: e,
                    })?;
                let disjuncts = expand_disjuncts(&expression).map_err(|e| LoadError::Macro {
                    location: at(line),
                    source: e,
                })?;
                let id = dict.push_rule(Rule {
                    expression,
                    disjuncts,
                    words: Vec::new(),
                    origin: at(line),
                });
                for target in targets {
                    match target {
                        EntryTarget::Word(w) => dict.assign(&w, id),
                        EntryTarget::File(path) => {
                            let text = source.include_resolver.resolve(&path).ok_or_else(|| {
                                LoadError::MissingInclude {
                                    location: at(line),
                                    path: path.clone(),
                                }
                            })?;
                            let before = dict.rules()[id].words.len();
                            for w in words_in_list(&text) {
                                dict.assign(w, id);
                            }
                            if dict.rules()[id].words.len() == before {
                                warnings.push(LoadWarning {
                                    location: at(line),
                                    message: format!("word list `{path}` is empty"),
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    let stats = dict.stats();
    let report = LoadReport {
        rule_count: stats.rule_count,
        word_form_count: stats.word_form_count,
        phrase_count: stats.phrase_count,
        macro_count: stats.macro_count,
        warnings,
    };
    Ok((dict, report))
}
