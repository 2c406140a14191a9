//! Interval dynamic program over connector lists.
//!
//! A region `(l, r)` holds the unconsumed right connectors of word `l` and
//! the unconsumed left connectors of word `r`; every word strictly inside
//! must be linked, directly or through other inner words, to `l` or `r`.
//! Inside a non-empty region, the word `w` that `l`'s farthest remaining
//! connector reaches splits it into `(l, w)` and `(w, r)`; when `l` has
//! nothing left, `w` is the word reached by `r`'s farthest remaining
//! connector. Links never cross, every inner word is connected, and two
//! words are never linked twice.
//!
//! The sentence gets a virtual word at position `n` with no connectors, so
//! the top-level region is `(0, n)`.
//!
//! Connector lists are interned as cons cells, farthest connector first, so
//! regions are keyed by list identity and disjuncts sharing a tail share
//! their sub-results.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::{HashMap, HashSet};

use super::Link;
use crate::model::{expression::dedup, match_connectors, Connector, Direction, Disjunct};

pub(crate) type ConnId = u32;
pub(crate) type LabelId = u32;
pub(crate) type ListId = u32;
const NO_LABEL: LabelId = LabelId::MAX;
const EMPTY: ListId = 0;

/// Interned connectors with a precomputed match/label table.
#[derive(Debug, Default)]
pub(crate) struct ConnTable {
    conns: Vec<Connector>,
    index: HashMap<Connector, ConnId>,
    multi: Vec<bool>,
    // labels[right_id * len + left_id]
    labels: Vec<LabelId>,
    label_names: Vec<String>,
    label_index: HashMap<String, LabelId>,
}

impl ConnTable {
    fn intern(&mut self, c: &Connector) -> ConnId {
        if let Some(&id) = self.index.get(c) {
            return id;
        }
        let id = self.conns.len() as ConnId;
        self.conns.push(c.clone());
        self.multi.push(c.multi);
        self.index.insert(c.clone(), id);
        id
    }

    fn finish(&mut self) {
        let n = self.conns.len();
        self.labels = alloc::vec![NO_LABEL; n * n];
        for (a, ca) in self.conns.iter().enumerate() {
            if ca.direction != Direction::Right {
                continue;
            }
            for (b, cb) in self.conns.iter().enumerate() {
                if match_connectors(ca, cb) {
                    let name = ca.link_label(cb);
                    let next = self.label_names.len() as LabelId;
                    let id = *self.label_index.entry(name.clone()).or_insert(next);
                    if id == next {
                        self.label_names.push(name);
                    }
                    self.labels[a * n + b] = id;
                }
            }
        }
    }

    #[inline]
    pub(crate) fn label(&self, right: ConnId, left: ConnId) -> Option<LabelId> {
        let l = self.labels[right as usize * self.conns.len() + left as usize];
        (l != NO_LABEL).then_some(l)
    }

    pub(crate) fn label_name(&self, id: LabelId) -> &str {
        &self.label_names[id as usize]
    }

    pub(crate) fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_index.get(name).copied()
    }

    #[inline]
    fn is_multi(&self, c: ConnId) -> bool {
        self.multi[c as usize]
    }
}

/// Hash-consed connector lists; list `0` is empty.
#[derive(Debug)]
struct Lists {
    cells: Vec<(ConnId, ListId)>,
    index: HashMap<(ConnId, ListId), ListId>,
}

impl Lists {
    fn new() -> Self {
        Lists {
            cells: alloc::vec![(ConnId::MAX, EMPTY)],
            index: HashMap::new(),
        }
    }

    fn intern(&mut self, farthest_first: &[ConnId]) -> ListId {
        let mut id = EMPTY;
        for &c in farthest_first.iter().rev() {
            id = match self.index.get(&(c, id)) {
                Some(&x) => x,
                None => {
                    let x = self.cells.len() as ListId;
                    self.cells.push((c, id));
                    self.index.insert((c, id), x);
                    x
                }
            };
        }
        id
    }

    #[inline]
    fn head(&self, id: ListId) -> Option<ConnId> {
        (id != EMPTY).then(|| self.cells[id as usize].0)
    }

    #[inline]
    fn tail(&self, id: ListId) -> ListId {
        self.cells[id as usize].1
    }
}

#[derive(Debug, Clone)]
pub(crate) struct PDisj {
    /// Farthest-first connector ids.
    pub left_ff: Vec<ConnId>,
    pub right_ff: Vec<ConnId>,
    left: ListId,
    right: ListId,
    pub cost: u32,
    /// Index into the token's original disjunct list.
    pub orig: usize,
}

/// Disjuncts of the distinct tokens of one sentence or bag, sharing one
/// connector table.
///
/// Disjuncts with a connector that no other word of the bag can satisfy
/// are dropped up front, repeatedly, until nothing changes.
#[derive(Debug)]
pub(crate) struct Prepared {
    pub table: ConnTable,
    lists: Lists,
    pub prepared: Vec<Vec<PDisj>>,
    pub original: Vec<Vec<Disjunct>>,
    /// Per token: disjuncts grouped by their (non-empty) left list.
    by_left: Vec<Vec<(ListId, Vec<u32>)>>,
    /// Per token: disjuncts grouped by their (non-empty) right list.
    by_right: Vec<Vec<(ListId, Vec<u32>)>>,
}

fn group(ds: &[PDisj], pick: fn(&PDisj) -> ListId) -> Vec<(ListId, Vec<u32>)> {
    let mut groups: Vec<(ListId, Vec<u32>)> = Vec::new();
    let mut at: HashMap<ListId, usize> = HashMap::new();
    for (i, d) in ds.iter().enumerate() {
        let id = pick(d);
        if id == EMPTY {
            continue;
        }
        let g = *at.entry(id).or_insert_with(|| {
            groups.push((id, Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(i as u32);
    }
    groups
}

impl Prepared {
    /// `counts[t]` is how often token `t` occurs.
    pub(crate) fn new(per_token: Vec<Vec<Disjunct>>, counts: &[usize]) -> Self {
        let mut table = ConnTable::default();
        let mut lists = Lists::new();
        let mut prepared: Vec<Vec<PDisj>> = Vec::with_capacity(per_token.len());
        for list in &per_token {
            prepared.push(
                list.iter()
                    .enumerate()
                    .map(|(orig, d)| {
                        // both lists are written nearest-first
                        let left_ff: Vec<ConnId> =
                            d.left.iter().rev().map(|c| table.intern(c)).collect();
                        let right_ff: Vec<ConnId> =
                            d.right.iter().rev().map(|c| table.intern(c)).collect();
                        PDisj {
                            left: lists.intern(&left_ff),
                            right: lists.intern(&right_ff),
                            left_ff,
                            right_ff,
                            cost: d.cost,
                            orig,
                        }
                    })
                    .collect(),
            );
        }
        table.finish();
        prune(&table, &mut prepared, counts);
        let by_left = prepared.iter().map(|ds| group(ds, |d| d.left)).collect();
        let by_right = prepared.iter().map(|ds| group(ds, |d| d.right)).collect();
        Prepared {
            table,
            lists,
            prepared,
            original: per_token,
            by_left,
            by_right,
        }
    }

    /// Whether some right connector of token `a` matches some left connector of `b`.
    pub(crate) fn connects(&self, a: usize, b: usize) -> bool {
        let rights: HashSet<ConnId> = self.prepared[a]
            .iter()
            .flat_map(|d| d.right_ff.iter().copied())
            .collect();
        let lefts: HashSet<ConnId> = self.prepared[b]
            .iter()
            .flat_map(|d| d.left_ff.iter().copied())
            .collect();
        rights
            .iter()
            .any(|&r| lefts.iter().any(|&l| self.table.label(r, l).is_some()))
    }
}

fn prune(table: &ConnTable, prepared: &mut [Vec<PDisj>], counts: &[usize]) {
    loop {
        let lefts: Vec<HashSet<ConnId>> = prepared
            .iter()
            .map(|ds| ds.iter().flat_map(|d| d.left_ff.iter().copied()).collect())
            .collect();
        let rights: Vec<HashSet<ConnId>> = prepared
            .iter()
            .map(|ds| ds.iter().flat_map(|d| d.right_ff.iter().copied()).collect())
            .collect();
        let mut changed = false;
        for (t, ds) in prepared.iter_mut().enumerate() {
            // a word can link to another copy of itself
            let partner = |u: usize| u != t || counts.get(t).copied().unwrap_or(1) > 1;
            let mut right_ok: HashMap<ConnId, bool> = HashMap::new();
            let mut left_ok: HashMap<ConnId, bool> = HashMap::new();
            let before = ds.len();
            ds.retain(|d| {
                d.right_ff.iter().all(|&c| {
                    *right_ok.entry(c).or_insert_with(|| {
                        (0..lefts.len())
                            .filter(|&u| partner(u))
                            .any(|u| lefts[u].iter().any(|&b| table.label(c, b).is_some()))
                    })
                }) && d.left_ff.iter().all(|&c| {
                    *left_ok.entry(c).or_insert_with(|| {
                        (0..rights.len())
                            .filter(|&u| partner(u))
                            .any(|u| rights[u].iter().any(|&a| table.label(a, c).is_some()))
                    })
                })
            });
            changed |= ds.len() != before;
        }
        if !changed {
            return;
        }
    }
}

/// Union of disjuncts over rules, merged with the lowest cost kept.
pub(crate) fn merge_disjuncts<'a>(lists: impl Iterator<Item = &'a [Disjunct]>) -> Vec<Disjunct> {
    let mut all = Vec::new();
    for l in lists {
        all.extend_from_slice(l);
    }
    dedup(all)
}

/// Minimise cost, then maximise the number of forced links used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Score {
    pub cost: u32,
    pub forced: u32,
}

impl Score {
    const ZERO: Score = Score { cost: 0, forced: 0 };

    fn add(self, o: Score) -> Score {
        Score {
            cost: self.cost + o.cost,
            forced: self.forced + o.forced,
        }
    }
}

impl Ord for Score {
    fn cmp(&self, o: &Self) -> Ordering {
        self.cost
            .cmp(&o.cost)
            .then_with(|| o.forced.cmp(&self.forced))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Debug, Default)]
pub(crate) struct Constraints {
    pub forced: HashSet<(usize, usize, LabelId)>,
    pub forbidden: HashSet<(usize, usize, LabelId)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    l: u16,
    r: u16,
    lid: ListId,
    rid: ListId,
}

#[derive(Debug, Clone, Copy)]
enum Choice {
    Adjacent,
    Split {
        w: u16,
        dw: u32,
        /// Linked to `l`: the lists left in the sub-region `(l, w)`.
        left: Option<(ListId, ListId)>,
        /// Linked to `r`: the lists left in the sub-region `(w, r)`.
        right: Option<(ListId, ListId)>,
    },
}

pub(crate) struct Solver<'a> {
    prep: &'a Prepared,
    /// Token id at each position.
    seq: &'a [usize],
    constraints: Option<&'a Constraints>,
    memo: HashMap<Key, Option<(Score, Choice)>>,
}

/// Result of a solve: the original disjunct index per position and the links.
pub(crate) struct Solution {
    pub score: Score,
    pub choice: Vec<usize>,
    pub links: Vec<(usize, usize, LabelId)>,
}

fn consider(score: Score, choice: Choice, best: &mut Option<(Score, Choice)>) {
    if best.is_none_or(|(b, _)| score < b) {
        *best = Some((score, choice));
    }
}

impl<'a> Solver<'a> {
    pub(crate) fn new(
        prep: &'a Prepared,
        seq: &'a [usize],
        constraints: Option<&'a Constraints>,
    ) -> Self {
        Solver {
            prep,
            seq,
            constraints,
            memo: HashMap::new(),
        }
    }

    #[inline]
    fn disjuncts(&self, pos: usize) -> &'a [PDisj] {
        &self.prep.prepared[self.seq[pos]]
    }

    /// Disjuncts of the first word with nothing to link leftwards.
    fn starts(&self) -> impl Iterator<Item = (usize, &'a PDisj)> + 'a {
        self.prep.prepared[self.seq[0]]
            .iter()
            .enumerate()
            .filter(|(_, d)| d.left == EMPTY)
    }

    /// Best linkage of the whole sequence, if any.
    pub(crate) fn solve(&mut self) -> Option<Solution> {
        let n = self.seq.len();
        if n == 0 {
            return None;
        }
        let mut best: Option<(Score, usize)> = None;
        for (d0, d) in self.starts() {
            let base = Score {
                cost: d.cost,
                forced: 0,
            };
            if let Some(s) = self.region(0, d.right, n, EMPTY) {
                let total = base.add(s);
                if best.is_none_or(|(b, _)| total < b) {
                    best = Some((total, d0));
                }
            }
        }
        let (score, d0) = best?;
        let mut choice = alloc::vec![0usize; n];
        let mut links = Vec::new();
        let first = &self.disjuncts(0)[d0];
        choice[0] = first.orig;
        self.rebuild(0, first.right, n, EMPTY, &mut choice, &mut links);
        links.sort_unstable();
        Some(Solution {
            score,
            choice,
            links,
        })
    }

    /// Whether any linkage exists; cheaper than [`solve`](Self::solve) as
    /// nothing is rebuilt.
    pub(crate) fn exists(&mut self) -> bool {
        let n = self.seq.len();
        if n == 0 {
            return false;
        }
        let mut tried = HashSet::new();
        let starts: Vec<ListId> = self.starts().map(|(_, d)| d.right).collect();
        starts
            .into_iter()
            .any(|right| tried.insert(right) && self.region(0, right, n, EMPTY).is_some())
    }

    fn link_score(&self, l: usize, r: usize, label: LabelId) -> Option<Score> {
        match self.constraints {
            None => Some(Score::ZERO),
            Some(c) => {
                let key = (l, r, label);
                if c.forbidden.contains(&key) {
                    None
                } else if c.forced.contains(&key) {
                    Some(Score { cost: 0, forced: 1 })
                } else {
                    Some(Score::ZERO)
                }
            }
        }
    }

    fn region(&mut self, l: usize, lid: ListId, r: usize, rid: ListId) -> Option<Score> {
        let key = Key {
            l: l as u16,
            r: r as u16,
            lid,
            rid,
        };
        if let Some(v) = self.memo.get(&key) {
            return v.map(|(s, _)| s);
        }
        let out = self.compute(l, lid, r, rid);
        self.memo.insert(key, out);
        out.map(|(s, _)| s)
    }

    /// Links the heads of `xid` (on `x`) and `yid` (on `y`) and solves the
    /// region between them; a multi connector may stay for further links.
    fn link_then(
        &mut self,
        x: usize,
        xid: ListId,
        y: usize,
        yid: ListId,
    ) -> Option<(Score, (ListId, ListId))> {
        let prep = self.prep;
        let a = prep.lists.head(xid)?;
        let b = prep.lists.head(yid)?;
        let label = prep.table.label(a, b)?;
        let ls = self.link_score(x, y, label)?;
        let xs = [
            Some(prep.lists.tail(xid)),
            prep.table.is_multi(a).then_some(xid),
        ];
        let ys = [
            Some(prep.lists.tail(yid)),
            prep.table.is_multi(b).then_some(yid),
        ];
        let mut opt: Option<(Score, (ListId, ListId))> = None;
        for x2 in xs.into_iter().flatten() {
            for y2 in ys.into_iter().flatten() {
                if let Some(s) = self.region(x, x2, y, y2) {
                    let s = s.add(ls);
                    if opt.is_none_or(|(o, _)| s < o) {
                        opt = Some((s, (x2, y2)));
                    }
                }
            }
        }
        opt
    }

    fn compute(&mut self, l: usize, lid: ListId, r: usize, rid: ListId) -> Option<(Score, Choice)> {
        if r == l + 1 {
            return (lid == EMPTY && rid == EMPTY).then_some((Score::ZERO, Choice::Adjacent));
        }
        if lid == EMPTY && rid == EMPTY {
            return None;
        }
        let prep = self.prep;
        let mut best: Option<(Score, Choice)> = None;
        for w in l + 1..r {
            let tok = self.seq[w];
            let ds = &prep.prepared[tok];
            let w16 = w as u16;
            if lid != EMPTY {
                // `l`'s farthest connector reaches `w`
                let a = prep.lists.head(lid).expect("non-empty");
                for (left, group) in &prep.by_left[tok] {
                    let b = prep.lists.head(*left).expect("non-empty");
                    if prep.table.label(a, b).is_none() {
                        continue;
                    }
                    let Some((ls, lo)) = self.link_then(l, lid, w, *left) else {
                        continue;
                    };
                    for &dw in group {
                        let d = &ds[dw as usize];
                        let own = Score {
                            cost: d.cost,
                            forced: 0,
                        };
                        if let Some((rs, ro)) = self.link_then(w, d.right, r, rid) {
                            consider(
                                own.add(ls).add(rs),
                                Choice::Split {
                                    w: w16,
                                    dw,
                                    left: Some(lo),
                                    right: Some(ro),
                                },
                                &mut best,
                            );
                        }
                        if let Some(s) = self.region(w, d.right, r, rid) {
                            consider(
                                own.add(ls).add(s),
                                Choice::Split {
                                    w: w16,
                                    dw,
                                    left: Some(lo),
                                    right: None,
                                },
                                &mut best,
                            );
                        }
                    }
                }
            } else {
                // `l` is done; `r`'s farthest connector reaches `w`
                let c = prep.lists.head(rid).expect("non-empty");
                for (right, group) in &prep.by_right[tok] {
                    let e = prep.lists.head(*right).expect("non-empty");
                    if prep.table.label(e, c).is_none() {
                        continue;
                    }
                    let Some((rs, ro)) = self.link_then(w, *right, r, rid) else {
                        continue;
                    };
                    for &dw in group {
                        let d = &ds[dw as usize];
                        let own = Score {
                            cost: d.cost,
                            forced: 0,
                        };
                        if let Some(s) = self.region(l, EMPTY, w, d.left) {
                            consider(
                                own.add(rs).add(s),
                                Choice::Split {
                                    w: w16,
                                    dw,
                                    left: None,
                                    right: Some(ro),
                                },
                                &mut best,
                            );
                        }
                    }
                }
            }
        }
        best
    }

    fn rebuild(
        &mut self,
        l: usize,
        lid: ListId,
        r: usize,
        rid: ListId,
        choice: &mut [usize],
        links: &mut Vec<(usize, usize, LabelId)>,
    ) {
        let key = Key {
            l: l as u16,
            r: r as u16,
            lid,
            rid,
        };
        let Some(Some((_, c))) = self.memo.get(&key).copied() else {
            return;
        };
        let Choice::Split { w, dw, left, right } = c else {
            return;
        };
        let w = w as usize;
        let d = &self.disjuncts(w)[dw as usize];
        choice[w] = d.orig;
        let (dleft, dright) = (d.left, d.right);
        let prep = self.prep;
        let label = |x: ListId, y: ListId| {
            prep.table
                .label(
                    prep.lists.head(x).expect("linked"),
                    prep.lists.head(y).expect("linked"),
                )
                .expect("matched")
        };
        match left {
            Some((l2, w2)) => {
                links.push((l, w, label(lid, dleft)));
                self.rebuild(l, l2, w, w2, choice, links);
            }
            None => self.rebuild(l, lid, w, dleft, choice, links),
        }
        match right {
            Some((w2, r2)) => {
                links.push((w, r, label(dright, rid)));
                self.rebuild(w, w2, r, r2, choice, links);
            }
            None => self.rebuild(w, dright, r, rid, choice, links),
        }
    }
}

/// Minimum-cost linkage with the lexicographically smallest link set.
///
/// Links are fixed one at a time in sorted order: each step asks the solver
/// whether an optimal linkage exists whose links up to the candidate are
/// exactly the ones fixed so far plus the candidate.
pub(crate) fn best_linkage(prep: &Prepared, seq: &[usize]) -> Option<(Solution, Vec<Link>)> {
    let optimum = Solver::new(prep, seq, None).solve()?;
    let opt_cost = optimum.score.cost;

    // every link that could appear, in sorted order
    let mut universe: Vec<Link> = Vec::new();
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            let mut labels: Vec<LabelId> = Vec::new();
            for a in prep.prepared[seq[i]].iter().flat_map(|d| d.right_ff.iter()) {
                for b in prep.prepared[seq[j]].iter().flat_map(|d| d.left_ff.iter()) {
                    if let Some(lb) = prep.table.label(*a, *b) {
                        if !labels.contains(&lb) {
                            labels.push(lb);
                        }
                    }
                }
            }
            universe.extend(labels.into_iter().map(|lb| Link {
                left_index: i,
                right_index: j,
                label: prep.table.label_name(lb).into(),
            }));
        }
    }
    universe.sort();
    let key = |l: &Link| {
        (
            l.left_index,
            l.right_index,
            prep.table.label_id(&l.label).expect("interned"),
        )
    };

    let mut chosen: Vec<usize> = Vec::new();
    let mut next = 0usize;
    loop {
        let mut c = Constraints::default();
        for (k, link) in universe.iter().enumerate() {
            if chosen.contains(&k) {
                c.forced.insert(key(link));
            } else {
                c.forbidden.insert(key(link));
            }
        }
        if let Some(sol) = Solver::new(prep, seq, Some(&c)).solve() {
            if sol.score.cost == opt_cost && sol.score.forced as usize == chosen.len() {
                let links = chosen.iter().map(|&k| universe[k].clone()).collect();
                return Some((sol, links));
            }
        }
        let step = (next..universe.len()).find(|&k| {
            let mut c = Constraints::default();
            for (m, link) in universe.iter().enumerate().take(k + 1) {
                if chosen.contains(&m) || m == k {
                    c.forced.insert(key(link));
                } else {
                    c.forbidden.insert(key(link));
                }
            }
            Solver::new(prep, seq, Some(&c)).solve().is_some_and(|sol| {
                sol.score.cost == opt_cost && sol.score.forced as usize == chosen.len() + 1
            })
        });
        if let Some(k) = step {
            chosen.push(k);
            next = k + 1;
        } else {
            // unreachable when the solver is consistent; fall back to the optimum
            let links = optimum
                .links
                .iter()
                .map(|&(i, j, lb)| Link {
                    left_index: i,
                    right_index: j,
                    label: prep.table.label_name(lb).into(),
                })
                .collect();
            return Some((optimum, links));
        }
    }
}
