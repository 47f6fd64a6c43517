use std::collections::HashMap;

use crate::error::Result;
use crate::words::{FreeWord, Letter};

use super::handle::{Fingerprint, MarkedGroupHandle};

/// Counters collected while growing a ball.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct BallStats {
    pub oracle_calls: u64,
    /// Fingerprint matches that the oracle rejected.
    pub fingerprint_collisions: u64,
}

/// The Cayley ball of a marked group, grown one radius at a time.
///
/// Elements are numbered in shortlex order of their representatives. An
/// edge slot is `None` when its target lies outside the current radius.
pub struct BallBuilder<'h> {
    handle: &'h MarkedGroupHandle,
    words: Vec<FreeWord>,
    levels: Vec<usize>,
    edges: Vec<Vec<Option<usize>>>,
    /// `level_start[r]` is the index of the first element of length `r`.
    level_start: Vec<usize>,
    buckets: HashMap<Fingerprint, Vec<usize>>,
    key_len: usize,
    radius: usize,
    stats: BallStats,
}

impl<'h> BallBuilder<'h> {
    /// Starts with the radius-0 ball. `max_radius` bounds the radii this
    /// builder will be asked for and sizes the fingerprints.
    pub fn new(handle: &'h MarkedGroupHandle, max_radius: usize) -> Result<Self> {
        let rank = handle.rank();
        let mut b = BallBuilder {
            handle,
            words: vec![FreeWord::empty(rank)],
            levels: vec![0],
            edges: vec![vec![None; 2 * rank]],
            level_start: vec![0, 1],
            buckets: HashMap::new(),
            key_len: 2 * max_radius + 2,
            radius: 0,
            stats: BallStats::default(),
        };
        if let Some(key) = b.key(&FreeWord::empty(rank))? {
            b.buckets.insert(key, vec![0]);
        }
        b.close_level(0)?;
        Ok(b)
    }

    pub fn handle(&self) -> &MarkedGroupHandle {
        self.handle
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn stats(&self) -> BallStats {
        self.stats
    }

    fn letter_count(&self) -> usize {
        2 * self.handle.rank()
    }

    fn key(&mut self, w: &FreeWord) -> Result<Option<Fingerprint>> {
        match &self.handle.keying {
            Some(k) => Ok(Some((k.key)(w, self.key_len)?)),
            None => Ok(None),
        }
    }

    fn same(&mut self, w: &FreeWord, e: usize) -> Result<bool> {
        self.stats.oracle_calls += 1;
        let q = w.concat(&self.words[e].inverse());
        self.handle.is_trivial(&q)
    }

    /// The element equal to `w` among levels `lo..=hi`, if any.
    fn lookup(&mut self, w: &FreeWord, key: Option<&Fingerprint>, lo: usize, hi: usize) -> Result<Option<usize>> {
        let hi = hi.min(self.level_start.len() - 2);
        if lo > hi {
            return Ok(None);
        }
        if let Some(key) = key {
            let exact = self.handle.keying.as_ref().is_some_and(|k| k.exact);
            let candidates: Vec<usize> = self
                .buckets
                .get(key)
                .map(|v| v.iter().copied().filter(|&e| (lo..=hi).contains(&self.levels[e])).collect())
                .unwrap_or_default();
            for e in candidates {
                if exact || self.same(w, e)? {
                    return Ok(Some(e));
                }
                self.stats.fingerprint_collisions += 1;
            }
            return Ok(None);
        }
        for e in self.level_start[lo]..self.level_start[hi + 1] {
            if self.same(w, e)? {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    fn set_edge(&mut self, e: usize, letter: Letter, t: usize) {
        self.edges[e][letter.index()] = Some(t);
        if self.handle.involutive()[letter.gen as usize] {
            self.edges[e][letter.inv().index()] = Some(t);
        }
    }

    fn link(&mut self, from: usize, letter: Letter, to: usize) {
        self.set_edge(from, letter, to);
        self.set_edge(to, letter.inv(), from);
    }

    /// Resolves the edges that stay inside level `r`.
    fn close_level(&mut self, r: usize) -> Result<()> {
        for e in self.level_start[r]..self.level_start[r + 1] {
            for li in 0..self.letter_count() {
                if self.edges[e][li].is_some() {
                    continue;
                }
                let letter = Letter::from_index(li);
                if self.words[e].letters().last() == Some(&letter.inv()) {
                    continue;
                }
                let mut c = self.words[e].clone();
                c.push(letter);
                let key = self.key(&c)?;
                if let Some(t) = self.lookup(&c, key.as_ref(), r, r)? {
                    self.link(e, letter, t);
                }
            }
        }
        Ok(())
    }

    /// Extends the ball by one radius.
    pub fn grow(&mut self) -> Result<()> {
        let r = self.radius;
        let (start, end) = (self.level_start[r], self.level_start[r + 1]);
        self.level_start.push(end);
        let rank = self.handle.rank();
        for e in start..end {
            for li in 0..self.letter_count() {
                if self.edges[e][li].is_some() {
                    continue;
                }
                let letter = Letter::from_index(li);
                let mut c = self.words[e].clone();
                c.push(letter);
                let key = self.key(&c)?;
                let target = match self.lookup(&c, key.as_ref(), r + 1, r + 1)? {
                    Some(t) => t,
                    None => {
                        let id = self.words.len();
                        self.words.push(c);
                        self.levels.push(r + 1);
                        self.edges.push(vec![None; 2 * rank]);
                        *self.level_start.last_mut().unwrap() = id + 1;
                        if let Some(k) = key {
                            self.buckets.entry(k).or_default().push(id);
                        }
                        id
                    }
                };
                self.link(e, letter, target);
            }
        }
        self.radius = r + 1;
        self.close_level(r + 1)
    }

    pub fn grow_to(&mut self, radius: usize) -> Result<()> {
        while self.radius < radius {
            self.grow()?;
        }
        Ok(())
    }

    /// Number of elements of length at most `r`.
    pub fn count(&self, r: usize) -> usize {
        self.level_start[r.min(self.radius) + 1]
    }

    pub fn word(&self, e: usize) -> &FreeWord {
        &self.words[e]
    }

    pub fn level(&self, e: usize) -> usize {
        self.levels[e]
    }

    /// Target of `e` under `letter` if it lies in the current ball.
    pub fn edge(&self, e: usize, letter: Letter) -> Option<usize> {
        self.edges[e][letter.index()]
    }

    /// Follows `w` from the identity; `None` once it leaves the ball.
    pub fn locate(&self, w: &FreeWord) -> Option<usize> {
        w.letters().iter().try_fold(0, |e, &l| self.edge(e, l))
    }

    /// Whether the radius-`r` balls agree as labeled graphs. With
    /// `sphere_edges` false, edges joining two elements of length `r` are
    /// ignored. Both builders must have reached radius `r`.
    pub fn agrees_with(&self, other: &BallBuilder<'_>, r: usize, sphere_edges: bool) -> bool {
        assert!(self.radius >= r && other.radius >= r, "balls not grown to radius {r}");
        let n = self.count(r);
        if n != other.count(r) || self.words[..n] != other.words[..n] {
            return false;
        }
        let inside = |b: &BallBuilder<'_>, e: usize, li: usize| {
            let strict = !sphere_edges && b.levels[e] == r;
            b.edges[e][li].filter(|&t| b.levels[t] < r || (!strict && b.levels[t] == r))
        };
        (0..n).all(|e| (0..self.letter_count()).all(|li| inside(self, e, li) == inside(other, e, li)))
    }

    /// Snapshot of the ball of radius `r`.
    pub fn ball(&self, r: usize) -> CayleyBall {
        let n = self.count(r);
        CayleyBall {
            radius: r.min(self.radius),
            words: self.words[..n].to_vec(),
            edges: self.edges[..n]
                .iter()
                .map(|row| row.iter().map(|t| t.filter(|&t| t < n)).collect())
                .collect(),
            stats: self.stats,
        }
    }
}

/// A finished Cayley ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyBall {
    pub radius: usize,
    /// Shortlex-minimal representatives, in shortlex order.
    pub words: Vec<FreeWord>,
    /// `edges[e][letter.index()]`, `None` when the target is outside.
    pub edges: Vec<Vec<Option<usize>>>,
    pub stats: BallStats,
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn build_ball(h: &MarkedGroupHandle, radius: usize) -> Result<CayleyBall> {
    let mut b = BallBuilder::new(h, radius)?;
    b.grow_to(radius)?;
    Ok(b.ball(radius))
}

/// `γ(0), …, γ(n_max)`.
pub fn growth_sequence(h: &MarkedGroupHandle, n_max: usize) -> Result<Vec<usize>> {
    let mut b = BallBuilder::new(h, n_max)?;
    b.grow_to(n_max)?;
    Ok((0..=n_max).map(|r| b.count(r)).collect())
}
