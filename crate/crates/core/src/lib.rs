//! Surface realization over Link Grammar dictionaries.
//!
//! The crate loads dictionary source text into a [`Dictionary`], decides
//! whether an ordered token sequence admits a planar, connected linkage,
//! and enumerates every valid ordering of a bag of words. The [`eval`]
//! module scores generated sentences against references.
//!
//! Everything here is `no_std` + `alloc`; file access lives in the
//! `linkgen` crate.
#![no_std]

extern crate alloc;

pub mod eval;
pub mod generator;
pub mod linkage;
pub mod loader;
pub mod model;

pub use generator::{
    generate, GenerateError, GenerationOutcome, GenerationResult, Generator, GeneratorConfig,
    WordBag,
};
pub use linkage::{
    check_connectivity, check_planarity, connects, linkage_exists, Link, Linkage, LinkageError,
};
pub use loader::{make_dict, DictSource, IncludeResolver, LoadError, LoadReport};
pub use model::{match_connectors, Connector, Dictionary, Direction, Disjunct, Expression, Rule};
