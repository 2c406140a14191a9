#![allow(dead_code)]

pub mod metric_oracle;
pub mod oracle;

use linkgen_core::{make_dict, DictSource, Dictionary};

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> Dictionary {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    make_dict(&DictSource::from_text(name, &text)).unwrap().0
}

pub const TOY_WORDS: [&str; 12] = [
    "the", "a", "big", "red", "dog", "cat", "idea", "sleeps", "sees", "with", "and", "very",
];
