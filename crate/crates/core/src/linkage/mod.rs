//! Linkage validity for an ordered token sequence.
//!
//! A linkage picks one disjunct per token and links matching connectors so
//! that links do not cross, all tokens form one connected graph, and every
//! chosen connector is used. Both connector lists of a disjunct are consumed
//! in order, nearest word first, as in the English dictionary where
//! `{@A-} & D-` reads "adjectives, then the determiner further left". A
//! multi connector (`@`) takes one or more links.

pub(crate) mod solver;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{match_connectors, Dictionary, Disjunct};
use solver::{best_linkage, merge_disjuncts, Prepared};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Link {
    pub left_index: usize,
    pub right_index: usize,
    /// Head plus merged subscript, e.g. `Ds**c`.
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    /// Sorted by (left, right, label).
    pub links: Vec<Link>,
    pub disjunct_choice: Vec<Disjunct>,
    pub total_cost: u32,
}

impl Linkage {
    /// One line per link, for debugging.
    pub fn render(&self, tokens: &[&str]) -> String {
        let mut out = String::new();
        for l in &self.links {
            out.push_str(&format!(
                "{} --{}-- {}\n",
                tokens.get(l.left_index).copied().unwrap_or("?"),
                l.label,
                tokens.get(l.right_index).copied().unwrap_or("?")
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkageError {
    #[error("no dictionary rules for token `{0}`")]
    TokenWithoutRules(String),
}

/// True iff no two links `(a, b)`, `(c, d)` satisfy `a < c < b < d`.
pub fn check_planarity(links: &[Link]) -> bool {
    links.iter().all(|x| {
        links.iter().all(|y| {
            !(x.left_index < y.left_index
                && y.left_index < x.right_index
                && x.right_index < y.right_index)
        })
    })
}

/// True iff the undirected graph on `n` vertices with these links is connected.
pub fn check_connectivity(links: &[Link], n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut components = n;
    for l in links {
        if l.left_index >= n || l.right_index >= n {
            return false;
        }
        let a = find(&mut parent, l.left_index);
        let b = find(&mut parent, l.right_index);
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// All disjuncts usable by `token`, merged across its rules.
pub fn token_disjuncts(dict: &Dictionary, token: &str) -> Vec<Disjunct> {
    merge_disjuncts(
        dict.lookup(token)
            .into_iter()
            .map(|r| r.disjuncts.as_slice()),
    )
}

/// Whether some right connector of `left` can link to some left connector
/// of `right`. Unknown words never connect.
pub fn connects(dict: &Dictionary, left: &str, right: &str) -> bool {
    let lrules = dict.lookup(left);
    let rrules = dict.lookup(right);
    let rights = lrules
        .iter()
        .flat_map(|r| r.disjuncts.iter())
        .flat_map(|d| d.right.iter());
    let lefts: Vec<_> = rrules
        .iter()
        .flat_map(|r| r.disjuncts.iter())
        .flat_map(|d| d.left.iter())
        .collect();
    for a in rights {
        if lefts.iter().any(|b| match_connectors(a, b)) {
            return true;
        }
    }
    false
}

/// Finds a valid linkage of `tokens`, if any: the one with minimal total
/// cost, ties broken by the lexicographically smallest link set.
pub fn linkage_exists(dict: &Dictionary, tokens: &[&str]) -> Result<Option<Linkage>, LinkageError> {
    let mut distinct: Vec<&str> = Vec::new();
    let mut seq = Vec::with_capacity(tokens.len());
    for &t in tokens {
        let id = match distinct.iter().position(|&d| d == t) {
            Some(i) => i,
            None => {
                distinct.push(t);
                distinct.len() - 1
            }
        };
        seq.push(id);
    }
    let mut per_token = Vec::with_capacity(distinct.len());
    for &t in &distinct {
        let ds = token_disjuncts(dict, t);
        if ds.is_empty() {
            return Err(LinkageError::TokenWithoutRules(t.into()));
        }
        per_token.push(ds);
    }
    let mut counts = alloc::vec![0usize; distinct.len()];
    for &id in &seq {
        counts[id] += 1;
    }
    let prep = Prepared::new(per_token, &counts);
    Ok(find_linkage(&prep, &seq))
}

pub(crate) fn find_linkage(prep: &Prepared, seq: &[usize]) -> Option<Linkage> {
    let (sol, links) = best_linkage(prep, seq)?;
    let disjunct_choice = seq
        .iter()
        .zip(&sol.choice)
        .map(|(&tok, &d)| prep.original[tok][d].clone())
        .collect();
    Some(Linkage {
        links,
        disjunct_choice,
        total_cost: sol.score.cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(a: usize, b: usize) -> Link {
        Link {
            left_index: a,
            right_index: b,
            label: "X".into(),
        }
    }

    #[test]
    fn planarity_examples() {
        assert!(!check_planarity(&[link(0, 2), link(1, 3)]));
        assert!(check_planarity(&[link(0, 3), link(1, 2)]));
        assert!(check_planarity(&[]));
        assert!(check_planarity(&[link(0, 1), link(1, 2), link(0, 2)]));
    }

    #[test]
    fn connectivity_examples() {
        assert!(!check_connectivity(&[link(0, 1), link(2, 3)], 4));
        assert!(check_connectivity(&[link(0, 1)], 2));
        assert!(check_connectivity(&[], 1));
        assert!(!check_connectivity(&[], 2));
        assert!(check_connectivity(&[link(0, 2), link(1, 2)], 3));
    }
}
