//! Textbook versions of the metrics, written without sharing code with the
//! library.

#![allow(dead_code)]

use std::collections::HashMap;

/// Wagner-Fischer with the full table.
pub fn edit_distance_table(a: &[&str], b: &[&str]) -> usize {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in t[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = t[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t[a.len()][b.len()]
}

/// Plain recursion over the last tokens; exponential, for short lists.
pub fn edit_distance_brute(a: &[&str], b: &[&str]) -> usize {
    match (a.split_last(), b.split_last()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            let sub = edit_distance_brute(ra, rb) + usize::from(x != y);
            let del = edit_distance_brute(ra, b) + 1;
            let ins = edit_distance_brute(a, rb) + 1;
            sub.min(del).min(ins)
        }
    }
}

fn ngram_counts(s: &[&str], n: usize) -> HashMap<Vec<String>, usize> {
    let mut m = HashMap::new();
    if s.len() >= n {
        for i in 0..=s.len() - n {
            *m.entry(s[i..i + n].iter().map(|w| w.to_string()).collect())
                .or_insert(0) += 1;
        }
    }
    m
}

/// Clipped-precision BLEU with n = 1, 2, using the same one-token rule as
/// the library: no bigrams on either side counts as a perfect bigram score.
pub fn bleu2(c: &[&str], r: &[&str]) -> f64 {
    let mut logs = 0.0;
    for n in 1..=2 {
        let cc = ngram_counts(c, n);
        let rc = ngram_counts(r, n);
        let total: usize = cc.values().sum();
        let p = if total == 0 {
            if rc.is_empty() {
                1.0
            } else {
                0.0
            }
        } else {
            let m: usize = cc
                .iter()
                .map(|(g, k)| (*k).min(*rc.get(g).unwrap_or(&0)))
                .sum();
            m as f64 / total as f64
        };
        if p == 0.0 {
            return 0.0;
        }
        logs += p.ln() / 2.0;
    }
    let bp = if c.len() > r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / c.len() as f64).exp()
    };
    bp * logs.exp()
}
