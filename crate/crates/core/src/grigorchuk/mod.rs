//! The groups `G_ω` generated by `a, b_ω, c_ω, d_ω` acting on the binary
//! rooted tree, with the word problem solved by recursion on sections.
//!
//! Words act on the left-to-right convention: the first letter of a word is
//! applied to a vertex first. Conjugation is `h^g = g⁻¹ h g`.

mod omega;

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{klein_reduce, FreeWord, Gen, GenWord};

pub use omega::OmegaWord;

// Spin tables: `true` stands for `a`, `false` for the identity `e`.
const BETA: [bool; 3] = [true, true, false];
const ZETA: [bool; 3] = [true, false, true];
const DELTA: [bool; 3] = [false, true, true];

/// The `β, ζ, δ` tables deciding which of `b, c, d` act as `a` below the
/// vertex `0`.
pub struct SpinTables;

impl SpinTables {
    /// Whether `g ∈ {b, c, d}` restricted to the `0`-subtree acts as `a` when
    /// the current symbol is `symbol`.
    pub fn active(g: Gen, symbol: u8) -> bool {
        let s = symbol as usize;
        match g {
            Gen::A => true,
            Gen::B => BETA[s],
            Gen::C => ZETA[s],
            Gen::D => DELTA[s],
        }
    }

    /// Checks the tables against `β = (a, a, e)`, `ζ = (a, e, a)`,
    /// `δ = (e, a, a)` and that each symbol kills exactly one letter.
    pub fn verify() -> bool {
        let expected = BETA == [true, true, false] && ZETA == [true, false, true] && DELTA == [false, true, true];
        let one_dead = (0..3u8).all(|s| Gen::BCD.iter().filter(|&&g| !SpinTables::active(g, s)).count() == 1);
        expected && one_dead
    }

    /// The letter of `{b, c, d}` whose table entry at `symbol` is `e`.
    pub fn dead_letter(symbol: u8) -> Gen {
        *Gen::BCD.iter().find(|&&g| !SpinTables::active(g, symbol)).expect("one dead letter per symbol")
    }
}

/// A vertex of the binary tree, as its path from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex(pub Vec<u8>);

impl TreeVertex {
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' | '1' => Ok(c as u8 - b'0'),
                _ => Err(Error::ParseWord { input: s.into(), found: c }),
            })
            .collect::<Result<Vec<_>>>()
            .map(TreeVertex)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// Vertex at `depth` whose path spells `index` in binary, most significant
    /// bit first.
    pub fn from_index(index: usize, depth: usize) -> Self {
        TreeVertex((0..depth).map(|i| ((index >> (depth - 1 - i)) & 1) as u8).collect())
    }

    pub fn all_at_depth(depth: usize) -> impl Iterator<Item = TreeVertex> {
        (0..1usize << depth).map(move |i| TreeVertex::from_index(i, depth))
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Image of `v` under a single generator of `G_ω`.
pub fn generator_action(g: Gen, omega: &OmegaWord, v: &TreeVertex) -> TreeVertex {
    let mut out = v.clone();
    apply_generator(g, omega, &mut out.0);
    out
}

fn apply_generator(g: Gen, omega: &OmegaWord, path: &mut [u8]) {
    if path.is_empty() {
        return;
    }
    if g == Gen::A {
        path[0] ^= 1;
        return;
    }
    // descend along 1s (the generator repeats there with shifted ω); at the
    // first 0 act by the table entry on the next letter
    for i in 0..path.len() {
        if path[i] == 0 {
            if i + 1 < path.len() && SpinTables::active(g, omega.symbol(i)) {
                path[i + 1] ^= 1;
            }
            return;
        }
    }
}

/// Image of `v` under `w`, letters applied left to right.
pub fn act(w: &GenWord, omega: &OmegaWord, v: &TreeVertex) -> TreeVertex {
    let mut out = v.clone();
    for &g in w.letters() {
        apply_generator(g, omega, &mut out.0);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the number of `a` letters: the action on the first level.
pub fn root_parity(w: &GenWord) -> Parity {
    if w.count_a().is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Sections at the two children of the root, for a word of any parity.
/// `symbol` is the current first symbol of `ω`; the results live in `G_{τω}`
/// and are Klein-reduced.
fn split(w: &[Gen], symbol: u8) -> (GenWord, GenWord) {
    let mut side = [0u8, 1u8];
    let mut out = [Vec::new(), Vec::new()];
    for &g in w {
        if g == Gen::A {
            side[0] ^= 1;
            side[1] ^= 1;
            continue;
        }
        for t in 0..2 {
            if side[t] == 1 {
                out[t].push(g);
            } else if SpinTables::active(g, symbol) {
                out[t].push(Gen::A);
            }
        }
    }
    let [w0, w1] = out;
    (klein_reduce(&GenWord(w0)), klein_reduce(&GenWord(w1)))
}

/// `(w₀, w₁)`: the actions of an even word on the subtrees below `0` and `1`,
/// as words in `G_{τω}`.
pub fn sections(w: &GenWord, omega: &OmegaWord) -> Result<(GenWord, GenWord)> {
    if root_parity(w) == Parity::Odd {
        return Err(Error::OddParity);
    }
    Ok(split(w.letters(), omega.symbol(0)))
}

fn letter_acts_trivially(g: Gen, omega: &OmegaWord, pos: usize) -> bool {
    g != Gen::A && (pos..pos + omega.cycle_len()).all(|i| !SpinTables::active(g, omega.symbol(i)))
}

fn trivial_at(w: &GenWord, omega: &OmegaWord, pos: usize) -> bool {
    let w = klein_reduce(w);
    if root_parity(&w) == Parity::Odd {
        return false;
    }
    match w.len() {
        0 => true,
        1 => letter_acts_trivially(w.0[0], omega, pos),
        _ => {
            let (w0, w1) = split(w.letters(), omega.symbol(pos));
            debug_assert!(w0.len() < w.len() && w1.len() < w.len());
            trivial_at(&w0, omega, pos + 1) && trivial_at(&w1, omega, pos + 1)
        }
    }
}

fn require_faithful(omega: &OmegaWord) -> Result<()> {
    if omega.is_eventually_constant() {
        Err(Error::EventuallyConstant(omega.to_string()))
    } else {
        Ok(())
    }
}

/// Decides `w = e` in `G_ω` by contraction. Refuses eventually constant `ω`,
/// where the tree action does not give the intended group.
pub fn is_trivial(w: &GenWord, omega: &OmegaWord) -> Result<bool> {
    require_faithful(omega)?;
    Ok(trivial_at(w, omega, 0))
}

/// Root permutations of all sections of an element down to a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Portrait {
    depth: usize,
    bits: Vec<u64>,
}

impl Portrait {
    fn blank(depth: usize) -> Self {
        let nodes = (1usize << depth) - 1;
        Portrait { depth, bits: vec![0; nodes.div_ceil(64).max(1)] }
    }

    fn node_index(v: &TreeVertex) -> usize {
        let path = v.0.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        (1usize << v.depth()) - 1 + path
    }

    fn set(&mut self, node: usize) {
        self.bits[node / 64] |= 1 << (node % 64);
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Whether the element swaps the children of `v` (`v` of depth `< depth`).
    pub fn swaps_at(&self, v: &TreeVertex) -> bool {
        assert!(v.depth() < self.depth, "vertex below the portrait depth");
        let n = Portrait::node_index(v);
        self.bits[n / 64] >> (n % 64) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }
}

/// Portrait of `w` in `G_ω` for vertices of depth `< depth`.
pub fn portrait_of(w: &GenWord, omega: &OmegaWord, depth: usize) -> Portrait {
    let mut p = Portrait::blank(depth);
    fill_portrait(&klein_reduce(w), omega, 0, 0, 0, &mut p);
    p
}

fn fill_portrait(w: &GenWord, omega: &OmegaWord, pos: usize, level: usize, path: usize, p: &mut Portrait) {
    if level >= p.depth || w.is_empty() {
        return;
    }
    if root_parity(w) == Parity::Odd {
        p.set((1usize << level) - 1 + path);
    }
    let (w0, w1) = split(w.letters(), omega.symbol(pos));
    fill_portrait(&w0, omega, pos + 1, level + 1, path << 1, p);
    fill_portrait(&w1, omega, pos + 1, level + 1, (path << 1) | 1, p);
}

/// One plus the number of levels below vertex `1^pos` before `g` first acts
/// nontrivially there; `None` if it never does.
pub fn first_active_depth(g: Gen, omega: &OmegaWord, pos: usize) -> Option<usize> {
    if g == Gen::A {
        return Some(1);
    }
    (0..omega.cycle_len()).find(|&i| SpinTables::active(g, omega.symbol(pos + i))).map(|i| i + 1)
}

/// Portrait depth used to fingerprint elements whose quotients have length at
/// most `max_len`: `⌈log₂ max(ℓ,2)⌉ + 1 + A(ω)` where `A(ω)` bounds how deep
/// a single letter can hide its action.
pub fn separation_depth(omega: &OmegaWord, max_len: usize) -> usize {
    let log = usize::BITS as usize - (max_len.max(2) - 1).leading_zeros() as usize;
    let hide = (0..omega.cycle_len())
        .flat_map(|p| Gen::BCD.into_iter().map(move |g| (g, p)))
        .filter_map(|(g, p)| first_active_depth(g, omega, p))
        .max()
        .unwrap_or(1);
    log + 1 + hide
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// The order, a power of two.
    Exact(u64),
    Unknown,
}

/// Order of `w` in `G_ω` if it is `2^k` with `k ≤ max_exp`, by repeated
/// squaring.
pub fn order_of(w: &GenWord, omega: &OmegaWord, max_exp: u32) -> Result<Order> {
    require_faithful(omega)?;
    let mut cur = klein_reduce(w);
    for k in 0..=max_exp {
        if trivial_at(&cur, omega, 0) {
            return Ok(Order::Exact(1 << k));
        }
        cur = klein_reduce(&cur.concat(&cur));
    }
    Ok(Order::Unknown)
}

/// Word in `G_ω` for a word over the generators `x = d`, `y = ab` of `L_ω`.
pub fn translate_l_word(w: &FreeWord) -> Result<GenWord> {
    if w.rank() != 2 {
        return Err(Error::RankMismatch(w.rank(), 2));
    }
    let mut out = GenWord::new();
    for l in w.letters() {
        match (l.gen, l.inverse) {
            (0, _) => out.push(Gen::D),
            (_, false) => {
                out.push(Gen::A);
                out.push(Gen::B);
            }
            (_, true) => {
                out.push(Gen::B);
                out.push(Gen::A);
            }
        }
    }
    Ok(klein_reduce(&out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitVerdict {
    Trivial,
    Nontrivial,
    Unstable,
}

/// Default window of `k` values for [`limit_trivial`]:
/// `⌈log₂(|w|+1)⌉ + 2 ..= ⌈log₂(|w|+1)⌉ + 6`.
pub fn default_limit_window(w: &GenWord) -> std::ops::RangeInclusive<usize> {
    let n = w.len() + 1;
    let log = usize::BITS as usize - (n - 1).leading_zeros() as usize;
    log + 2..=log + 6
}

/// Triviality in the limit of `G_{0^k (012)^∞}`: the common verdict over the
/// window, or `Unstable` if the approximants disagree.
pub fn limit_trivial(w: &GenWord, ks: impl IntoIterator<Item = usize>) -> Result<LimitVerdict> {
    let verdicts: Vec<bool> = ks.into_iter().map(|k| trivial_at(w, &OmegaWord::zeros_then_012(k), 0)).collect();
    if verdicts.len() < 3 {
        return Err(Error::InvalidArgument("limit window needs at least three values".into()));
    }
    Ok(if verdicts.iter().all(|&v| v) {
        LimitVerdict::Trivial
    } else if verdicts.iter().all(|&v| !v) {
        LimitVerdict::Nontrivial
    } else {
        LimitVerdict::Unstable
    })
}

/// Relabeling of `{b, c, d}` identifying `G_{sss…}` with the `G_{000…}`
/// model: the letter dead at `s` plays the role of `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantRoute {
    pub symbol: u8,
    pub dead: Gen,
}

impl ConstantRoute {
    /// The `G_{000…}` letter corresponding to `g`.
    pub fn relabel(&self, g: Gen) -> Gen {
        match g {
            _ if g == self.dead => Gen::D,
            Gen::D => self.dead,
            other => other,
        }
    }
}

pub fn route_constant(symbol: u8) -> ConstantRoute {
    assert!(symbol <= 2, "symbol must be 0, 1 or 2");
    ConstantRoute { symbol, dead: SpinTables::dead_letter(symbol) }
}
