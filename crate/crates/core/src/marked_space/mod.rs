//! Marked groups at desk scale: Cayley balls, growth, the ultrametric
//! `d((G,S),(H,T)) = 2^{-N}` through relation agreement, and separating words.

mod ball;
mod handle;

use std::collections::HashMap;

use serde::Serialize;

pub use ball::{build_ball, growth_sequence, BallBuilder, BallStats, CayleyBall};
pub use handle::{Fingerprint, KeyFn, MarkedGroupHandle, Oracle};

use crate::error::{Error, Result};
use crate::words::{enumerate_reduced, enumerate_reduced_over, FreeWord, Letter};

fn check_ranks(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle) -> Result<()> {
    if h1.rank() != h2.rank() {
        return Err(Error::RankMismatch(h1.rank(), h2.rank()));
    }
    Ok(())
}

/// Whether every freely reduced word of length at most `max_len` has the same
/// verdict in both groups. Compares Cayley balls instead of enumerating words.
pub fn relation_agreement(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, max_len: usize) -> Result<bool> {
    check_ranks(h1, h2)?;
    let r = max_len / 2;
    let mut b1 = BallBuilder::new(h1, r)?;
    let mut b2 = BallBuilder::new(h2, r)?;
    for radius in 0..=r {
        b1.grow_to(radius)?;
        b2.grow_to(radius)?;
        let sphere = radius < r || max_len % 2 == 1;
        if !b1.agrees_with(&b2, radius, sphere) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`relation_agreement`] by direct enumeration of all reduced words.
pub fn relation_agreement_enumerative(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, max_len: usize) -> Result<bool> {
    check_ranks(h1, h2)?;
    for w in enumerate_reduced(h1.rank(), max_len) {
        if h1.is_trivial(&w)? != h2.is_trivial(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `N` such that all relations of length `≤ 2N+1` agree, as a
/// distance `2^{-N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Agreement {
    /// `None` when some generator is trivial in one group only.
    pub radius: Option<usize>,
    /// False when the search stopped at `N_max`, so `2^{-N}` is only an
    /// upper bound on the distance.
    pub exact: bool,
}

impl Agreement {
    pub fn distance_label(&self) -> String {
        match (self.radius, self.exact) {
            (None, _) => "1".to_string(),
            (Some(n), true) => format!("2^-{n}"),
            (Some(n), false) => format!("<= 2^-{n}"),
        }
    }

    /// `agree_N` as printed in tables, `-1` for [`Agreement::radius`] `None`.
    pub fn radius_value(&self) -> i64 {
        self.radius.map_or(-1, |n| n as i64)
    }
}

pub fn agree_radius(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, n_max: usize) -> Result<Agreement> {
    check_ranks(h1, h2)?;
    let mut b1 = BallBuilder::new(h1, n_max)?;
    agree_radius_against(&mut b1, h2, n_max)
}

/// [`agree_radius`] reusing an already started ball of the first group.
pub fn agree_radius_against(b1: &mut BallBuilder<'_>, h2: &MarkedGroupHandle, n_max: usize) -> Result<Agreement> {
    check_ranks(b1.handle(), h2)?;
    let mut b2 = BallBuilder::new(h2, n_max)?;
    for r in 0..=n_max {
        b1.grow_to(r)?;
        b2.grow_to(r)?;
        if !b1.agrees_with(&b2, r, true) {
            return Ok(Agreement { radius: r.checked_sub(1), exact: true });
        }
    }
    Ok(Agreement { radius: Some(n_max), exact: false })
}

fn shortlex(a: &FreeWord, b: &FreeWord) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.letters().cmp(b.letters()))
}

/// All trivial freely reduced words of length at most `max_len`, in shortlex
/// order. Walks the Cayley ball of radius `max_len / 2`.
pub fn relation_set(h: &MarkedGroupHandle, max_len: usize) -> Result<Vec<FreeWord>> {
    let mut b = BallBuilder::new(h, max_len / 2)?;
    b.grow_to(max_len / 2)?;
    let letters: Vec<Letter> = (0..2 * h.rank()).map(Letter::from_index).collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, FreeWord::empty(h.rank()))];
    while let Some((e, w)) = stack.pop() {
        if e == 0 {
            out.push(w.clone());
        }
        let left = max_len - w.len();
        if left == 0 {
            continue;
        }
        for &l in &letters {
            if w.letters().last() == Some(&l.inv()) {
                continue;
            }
            // an edge leaving the ball ends at distance > max_len - |w| - 1
            let Some(t) = b.edge(e, l) else { continue };
            if b.level(t) < left {
                let mut next = w.clone();
                next.push(l);
                stack.push((t, next));
            }
        }
    }
    out.sort_by(shortlex);
    Ok(out)
}

/// [`relation_set`] by direct enumeration.
pub fn relation_set_enumerative(h: &MarkedGroupHandle, max_len: usize) -> Result<Vec<FreeWord>> {
    let mut out = Vec::new();
    for w in enumerate_reduced(h.rank(), max_len) {
        if h.is_trivial(&w)? {
            out.push(w);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub index: usize,
    pub label: String,
    /// Length of the preperiod for handles built from a sequence `ω`.
    pub prefix_len: Option<usize>,
    pub agreement: Agreement,
}

/// Agreement radius of each target with `limit`, in input order.
pub fn convergence_table(
    targets: &[MarkedGroupHandle],
    limit: &MarkedGroupHandle,
    n_max: usize,
) -> Result<Vec<ConvergenceRow>> {
    let mut lb = BallBuilder::new(limit, n_max)?;
    targets
        .iter()
        .enumerate()
        .map(|(index, h)| {
            Ok(ConvergenceRow {
                index,
                label: h.label().to_string(),
                prefix_len: h.omega().map(|o| o.preperiod().len()),
                agreement: agree_radius_against(&mut lb, h, n_max)?,
            })
        })
        .collect()
}

fn to_csv<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii csv")
}

/// `n,gamma` rows.
pub fn growth_csv(gamma: &[usize]) -> String {
    to_csv(&["n", "gamma"], gamma.iter().enumerate())
}

/// `index,prefix_len,agree_N,exact` rows; `agree_N` is `-1` when even the
/// generators disagree.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    to_csv(
        &["index", "prefix_len", "agree_N", "exact"],
        rows.iter().map(|r| (r.index, r.prefix_len, r.agreement.radius_value(), r.agreement.exact)),
    )
}

/// A shortest word trivial in exactly one of two marked groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub word: FreeWord,
    /// Verdict in the first group.
    pub trivial_in_first: bool,
    pub is_square: bool,
    /// Both oracles were rerun on the word and disagree.
    pub verified: bool,
}

/// The first word in shortlex order, of length at most `l_max`, whose
/// verdicts differ.
///
/// The length is found by comparing balls; the word itself by meeting in the
/// middle over prefixes and suffixes of half length. Inverse letters of
/// generators that are involutions in both groups are never needed.
pub fn find_separating_word(h1: &MarkedGroupHandle, h2: &MarkedGroupHandle, l_max: usize) -> Result<Option<Separator>> {
    check_ranks(h1, h2)?;
    let mut b1 = BallBuilder::new(h1, l_max.div_ceil(2))?;
    let mut b2 = BallBuilder::new(h2, l_max.div_ceil(2))?;
    let mut len = None;
    for r in 0..=l_max / 2 {
        b1.grow_to(r)?;
        b2.grow_to(r)?;
        if !b1.agrees_with(&b2, r, false) {
            len = Some(2 * r);
            break;
        }
        if 2 * r < l_max && !b1.agrees_with(&b2, r, true) {
            len = Some(2 * r + 1);
            break;
        }
    }
    let Some(len) = len else { return Ok(None) };
    let (head, tail) = (len.div_ceil(2), len / 2);
    b1.grow_to(head)?;
    b2.grow_to(head)?;

    let both_inv = |g: usize| h1.involutive()[g] && h2.involutive()[g];
    let letters: Vec<Letter> = (0..2 * h1.rank())
        .map(Letter::from_index)
        .filter(|l| !l.inverse || !both_inv(l.gen as usize))
        .collect();
    let exact = |n: usize| enumerate_reduced_over(h1.rank(), n, &letters).filter(move |w| w.len() == n);
    let place = |b: &BallBuilder<'_>, w: &FreeWord| b.locate(w).expect("word inside the ball");

    let suffixes: Vec<(FreeWord, usize, usize)> = exact(tail)
        .map(|q| {
            let qi = q.inverse();
            let (x, y) = (place(&b1, &qi), place(&b2, &qi));
            (q, x, y)
        })
        .collect();
    let mut by1: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut by2: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, (_, x, y)) in suffixes.iter().enumerate() {
        by1.entry(*x).or_default().push(i);
        by2.entry(*y).or_default().push(i);
    }
    for p in exact(head) {
        let (x, y) = (place(&b1, &p), place(&b2, &p));
        let mut cands: Vec<usize> = by1.get(&x).into_iter().chain(by2.get(&y)).flatten().copied().collect();
        cands.sort_unstable();
        cands.dedup();
        for i in cands {
            let (q, qx, qy) = &suffixes[i];
            if let (Some(&a), Some(&b)) = (p.letters().last(), q.letters().first()) {
                if a == b.inv() {
                    continue;
                }
            }
            let (t1, t2) = (*qx == x, *qy == y);
            if t1 != t2 {
                let word = p.concat(q);
                let verified = h1.is_trivial(&word)? == t1 && h2.is_trivial(&word)? == t2;
                return Ok(Some(Separator { is_square: word.is_square(), word, trivial_in_first: t1, verified }));
            }
        }
    }
    Err(Error::InvalidArgument(format!(
        "balls differ at length {len} but no separating word of that length was found"
    )))
}
