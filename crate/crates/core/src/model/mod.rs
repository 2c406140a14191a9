//! Connectors, connector expressions, disjuncts and dictionaries.

mod connector;
mod dictionary;
pub(crate) mod expression;

pub use connector::{
    match_connectors, subscripts_compatible, Connector, Direction, MalformedConnector,
};
pub use dictionary::{is_phrase, split_subscript, DictStats, Dictionary, Rule, SourceLocation};
pub use expression::{expand_disjuncts, substitute_macros, Disjunct, Expression, MacroError};
