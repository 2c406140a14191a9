//! Sentence-level similarity metrics over token lists.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("empty sentence")]
    EmptySentence,
    #[error("empty reference")]
    EmptyReference,
}

/// Token-level edit distance with unit costs.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn clipped_matches<'a, S: AsRef<str>, const N: usize>(
    cand: &'a [S],
    reference: &'a [S],
) -> (usize, usize) {
    let grams = |s: &'a [S]| {
        let mut m: HashMap<[&'a str; N], usize> = HashMap::new();
        for w in s.windows(N) {
            let key: [&str; N] = core::array::from_fn(|i| w[i].as_ref());
            *m.entry(key).or_default() += 1;
        }
        m
    };
    let c = grams(cand);
    let r = grams(reference);
    let matched = c
        .iter()
        .map(|(g, &n)| n.min(r.get(g).copied().unwrap_or(0)))
        .sum();
    (matched, cand.len().saturating_sub(N - 1))
}

/// BLEU with unigrams and bigrams: the geometric mean of the clipped
/// precisions times the brevity penalty.
///
/// A one-token candidate has no bigrams; its bigram precision counts as 1
/// when the reference has none either and 0 otherwise.
pub fn bleu2<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> Result<f64, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptySentence);
    }
    let (m1, t1) = clipped_matches::<S, 1>(candidate, reference);
    let (m2, t2) = clipped_matches::<S, 2>(candidate, reference);
    let p1 = m1 as f64 / t1 as f64;
    let p2 = if t2 == 0 {
        if reference.len() == 1 {
            1.0
        } else {
            0.0
        }
    } else {
        m2 as f64 / t2 as f64
    };
    if p1 == 0.0 || p2 == 0.0 {
        return Ok(0.0);
    }
    let c = candidate.len() as f64;
    let r = reference.len() as f64;
    let bp = if c > r { 1.0 } else { libm::exp(1.0 - r / c) };
    Ok(bp * libm::sqrt(p1 * p2))
}

/// Word error rate: edit distance over the reference length.
pub fn wer<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    let a: Vec<&str> = candidate.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();
    Ok(levenshtein(&a, &b) as f64 / b.len() as f64)
}

/// Edits needed to turn `candidate` into `reference` when moving a block of
/// tokens counts as one edit.
///
/// Shifts are applied greedily, always the one that lowers the total the
/// most, until no shift pays for itself. Every block and destination is
/// tried, so the search is exhaustive at each step.
pub fn ter_edits<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> usize {
    let mut hyp: Vec<&str> = candidate.iter().map(AsRef::as_ref).collect();
    let reference: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();
    let mut shifts = 0;
    let mut dist = levenshtein(&hyp, &reference);
    loop {
        let mut best: Option<(usize, Vec<&str>)> = None;
        let n = hyp.len();
        for start in 0..n {
            for len in 1..=n - start {
                let block = &hyp[start..start + len];
                let rest: Vec<&str> = hyp[..start]
                    .iter()
                    .chain(&hyp[start + len..])
                    .copied()
                    .collect();
                for dest in 0..=rest.len() {
                    if dest == start {
                        continue;
                    }
                    let mut moved = Vec::with_capacity(n);
                    moved.extend_from_slice(&rest[..dest]);
                    moved.extend_from_slice(block);
                    moved.extend_from_slice(&rest[dest..]);
                    let d = levenshtein(&moved, &reference);
                    if d + 1 < dist && best.as_ref().is_none_or(|(b, _)| d < *b) {
                        best = Some((d, moved));
                    }
                }
            }
        }
        match best {
            Some((d, moved)) => {
                hyp = moved;
                dist = d;
                shifts += 1;
            }
            None => return shifts + dist,
        }
    }
}

/// Translation edit rate: [`ter_edits`] over the reference length.
pub fn ter<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    Ok(ter_edits(candidate, reference) as f64 / reference.len() as f64)
}
