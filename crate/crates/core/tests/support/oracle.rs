//! Brute-force reference for linkage validity, independent of the solver.
//!
//! Enumerates every non-crossing connected set of word pairs, then tries to
//! explain each word's links with one of its disjuncts: the neighbours on
//! each side, nearest first, are split into consecutive runs, one run per
//! connector, a run of length one unless the connector is multi.

#![allow(dead_code)]

use std::collections::BTreeMap;

use linkgen_core::linkage::token_disjuncts;
use linkgen_core::{match_connectors, Connector, Dictionary, Disjunct, Link, Linkage};

pub type Graph = Vec<(usize, usize)>;

fn crossing(a: (usize, usize), b: (usize, usize)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

fn connected(n: usize, g: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in g {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// All non-crossing connected graphs on `n` ordered vertices.
pub fn planar_connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let g: Graph = (0..pairs.len())
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| pairs[k])
            .collect();
        if n > 1 && g.len() < n - 1 {
            continue;
        }
        let planar = g
            .iter()
            .enumerate()
            .all(|(i, &a)| g[i + 1..].iter().all(|&b| !crossing(a, b)));
        if planar && connected(n, &g) {
            out.push(g);
        }
    }
    out
}

/// Ways to hand `k` neighbours (nearest first) to `conns` in order.
/// Each result gives the connector index used for every neighbour.
fn runs(conns: &[Connector], k: usize) -> Vec<Vec<usize>> {
    fn go(
        conns: &[Connector],
        ci: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if ci == conns.len() {
            if cur.len() == k {
                out.push(cur.clone());
            }
            return;
        }
        let left = k - cur.len();
        let max = if conns[ci].multi { left } else { left.min(1) };
        for take in 1..=max {
            for _ in 0..take {
                cur.push(ci);
            }
            go(conns, ci + 1, k, cur, out);
            cur.truncate(cur.len() - take);
        }
    }
    let mut out = Vec::new();
    go(conns, 0, k, &mut Vec::new(), &mut out);
    out
}

/// For one word: every (disjunct index, neighbour -> connector) explanation.
fn word_options<'a>(
    disjuncts: &'a [Disjunct],
    w: usize,
    graph: &[(usize, usize)],
) -> Vec<(usize, BTreeMap<usize, &'a Connector>)> {
    let mut left: Vec<usize> = graph.iter().filter(|e| e.1 == w).map(|e| e.0).collect();
    let mut right: Vec<usize> = graph.iter().filter(|e| e.0 == w).map(|e| e.1).collect();
    left.sort_unstable_by(|a, b| b.cmp(a));
    right.sort_unstable();
    let mut out = Vec::new();
    for (di, d) in disjuncts.iter().enumerate() {
        for lr in runs(&d.left, left.len()) {
            for rr in runs(&d.right, right.len()) {
                let mut m = BTreeMap::new();
                for (nb, ci) in left.iter().zip(&lr) {
                    m.insert(*nb, &d.left[*ci]);
                }
                for (nb, ci) in right.iter().zip(&rr) {
                    m.insert(*nb, &d.right[*ci]);
                }
                out.push((di, m));
            }
        }
    }
    out
}

/// A valid linkage found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub cost: u32,
    pub links: Vec<Link>,
    pub choice: Vec<usize>,
}

/// Every valid linkage of a sequence whose i-th word has `words[i]` disjuncts.
pub fn all_linkages(words: &[Vec<Disjunct>], graphs: &[Graph]) -> Vec<Found> {
    linkages(words, graphs, false)
}

/// Whether the sequence has at least one valid linkage.
pub fn has_linkage(words: &[Vec<Disjunct>], graphs: &[Graph]) -> bool {
    !linkages(words, graphs, true).is_empty()
}

fn linkages(words: &[Vec<Disjunct>], graphs: &[Graph], first_only: bool) -> Vec<Found> {
    let n = words.len();
    let mut out = Vec::new();
    if n == 1 {
        for (di, d) in words[0].iter().enumerate() {
            if d.is_empty() {
                out.push(Found {
                    cost: d.cost,
                    links: vec![],
                    choice: vec![di],
                });
            }
        }
        return out;
    }
    for g in graphs {
        let mut options = Vec::with_capacity(n);
        for (w, ds) in words.iter().enumerate() {
            let o = word_options(ds, w, g);
            if o.is_empty() {
                break;
            }
            options.push(o);
        }
        if options.len() < n {
            continue;
        }
        let mut pick = vec![0usize; n];
        search(words, g, &options, 0, &mut pick, &mut out, first_only);
        if first_only && !out.is_empty() {
            break;
        }
    }
    out
}

fn search(
    words: &[Vec<Disjunct>],
    g: &[(usize, usize)],
    options: &[Vec<(usize, BTreeMap<usize, &Connector>)>],
    w: usize,
    pick: &mut Vec<usize>,
    out: &mut Vec<Found>,
    first_only: bool,
) {
    if first_only && !out.is_empty() {
        return;
    }
    if w == options.len() {
        let mut links: Vec<Link> = g
            .iter()
            .map(|&(a, b)| {
                let ca = options[a][pick[a]].1[&b];
                let cb = options[b][pick[b]].1[&a];
                Link {
                    left_index: a,
                    right_index: b,
                    label: ca.link_label(cb),
                }
            })
            .collect();
        links.sort();
        let choice: Vec<usize> = (0..options.len()).map(|v| options[v][pick[v]].0).collect();
        let cost = choice
            .iter()
            .enumerate()
            .map(|(v, &d)| words[v][d].cost)
            .sum();
        out.push(Found {
            cost,
            links,
            choice,
        });
        return;
    }
    for (oi, (_, m)) in options[w].iter().enumerate() {
        let ok = g.iter().filter(|e| e.1 == w).all(|&(a, _)| {
            let ca = options[a][pick[a]].1[&w];
            match_connectors(ca, m[&a])
        });
        if ok {
            pick[w] = oi;
            search(words, g, options, w + 1, pick, out, first_only);
        }
    }
}

/// The linkage the engine should report: minimum cost, then smallest links.
pub fn best(words: &[Vec<Disjunct>], graphs: &[Graph]) -> Option<(u32, Vec<Link>)> {
    all_linkages(words, graphs)
        .into_iter()
        .map(|f| (f.cost, f.links))
        .min()
}

pub fn disjuncts_of(dict: &Dictionary, tokens: &[&str]) -> Vec<Vec<Disjunct>> {
    tokens.iter().map(|t| token_disjuncts(dict, t)).collect()
}

/// Checks a reported linkage on its own terms: each chosen disjunct is one
/// of the word's disjuncts, links are non-crossing, connect every word, and
/// use every chosen connector in order with matching labels.
pub fn check_linkage(dict: &Dictionary, tokens: &[&str], linkage: &Linkage) -> Result<(), String> {
    let n = tokens.len();
    if linkage.disjunct_choice.len() != n {
        return Err(format!(
            "{} disjuncts for {n} words",
            linkage.disjunct_choice.len()
        ));
    }
    for (t, d) in tokens.iter().zip(&linkage.disjunct_choice) {
        if !token_disjuncts(dict, t).contains(d) {
            return Err(format!("`{d}` is not a disjunct of `{t}`"));
        }
    }
    let cost: u32 = linkage.disjunct_choice.iter().map(|d| d.cost).sum();
    if cost != linkage.total_cost {
        return Err(format!("cost {} reported as {}", cost, linkage.total_cost));
    }
    let g: Graph = linkage
        .links
        .iter()
        .map(|l| (l.left_index, l.right_index))
        .collect();
    for (i, &a) in g.iter().enumerate() {
        if a.0 >= a.1 || a.1 >= n {
            return Err(format!("bad link {a:?}"));
        }
        for &b in &g[i + 1..] {
            if a == b {
                return Err(format!("duplicate link {a:?}"));
            }
            if crossing(a, b) {
                return Err(format!("links {a:?} and {b:?} cross"));
            }
        }
    }
    if n > 0 && !connected(n, &g) {
        return Err("not connected".into());
    }
    // the chosen disjuncts alone must explain the links with these labels
    let single: Vec<Vec<Disjunct>> = linkage
        .disjunct_choice
        .iter()
        .map(|d| vec![d.clone()])
        .collect();
    let graphs = [g];
    let ok = all_linkages(&single, &graphs)
        .into_iter()
        .any(|f| f.links == linkage.links);
    if ok {
        Ok(())
    } else {
        Err("connectors not consumed exactly by the links".into())
    }
}

/// Distinct orderings of `tokens` that the oracle accepts, sorted.
pub fn brute_generate(dict: &Dictionary, tokens: &[&str], graphs: &[Graph]) -> Vec<Vec<String>> {
    let mut sorted: Vec<&str> = tokens.to_vec();
    sorted.sort_unstable();
    let cache: BTreeMap<&str, Vec<Disjunct>> = sorted
        .iter()
        .map(|&t| (t, token_disjuncts(dict, t)))
        .collect();
    let mut out = Vec::new();
    loop {
        let words: Vec<Vec<Disjunct>> = sorted.iter().map(|t| cache[t].clone()).collect();
        if has_linkage(&words, graphs) {
            out.push(sorted.iter().map(|s| s.to_string()).collect());
        }
        if !next_permutation(&mut sorted) {
            break;
        }
    }
    out
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
