//! Word algebra shared by every group model: free-group words with free
//! reduction and length-lex enumeration, and words over `{a, b, c, d}` with
//! reduction modulo the Klein four-group relations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse. Letters order as `x0 < x0⁻¹ < x1 < x1⁻¹ < …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub const fn pos(gen: u8) -> Self {
        Letter { gen, inverse: false }
    }

    pub const fn neg(gen: u8) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// Position in the enumeration order, `2·gen + inverse`.
    pub fn index(self) -> usize {
        2 * self.gen as usize + self.inverse as usize
    }

    pub fn from_index(index: usize) -> Self {
        Letter { gen: (index / 2) as u8, inverse: index % 2 == 1 }
    }
}

/// Names for the generators of a free group, one character each. Positive
/// letters print lowercase, inverses uppercase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(names: &str) -> Self {
        Alphabet { names: names.chars().map(|c| c.to_ascii_lowercase()).collect() }
    }

    /// `a b c d e f …` for the first `rank` generators.
    pub fn standard(rank: usize) -> Self {
        Alphabet { names: (0..rank).map(|i| (b'a' + i as u8) as char).collect() }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, gen: u8) -> char {
        self.names[gen as usize]
    }

    fn lookup(&self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase();
        let gen = self.names.iter().position(|&n| n == lower)? as u8;
        Some(Letter { gen, inverse: c.is_ascii_uppercase() })
    }

    fn render(&self, l: Letter) -> char {
        let c = self.name(l.gen);
        if l.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A word in the free group `F_k`. Not necessarily freely reduced; use
/// [`FreeWord::reduced`] or [`free_reduce`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn new(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("free group rank must be at least 1".into()));
        }
        if let Some(l) = letters.iter().find(|l| l.gen as usize >= rank) {
            return Err(Error::GeneratorOutOfRange { index: l.gen as usize, rank });
        }
        Ok(FreeWord { rank, letters })
    }

    pub fn empty(rank: usize) -> Self {
        assert!(rank >= 1, "free group rank must be at least 1");
        FreeWord { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, gen: u8) -> Self {
        FreeWord::new(rank, vec![Letter::pos(gen)]).expect("generator in range")
    }

    /// Parses letter notation: lowercase for a generator, uppercase (or a
    /// trailing `^-1` / `⁻¹`) for its inverse. Whitespace is ignored; `1`
    /// alone is the empty word.
    pub fn parse(input: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        let trimmed = input.trim();
        if trimmed == "1" {
            return Ok(FreeWord::empty(alphabet.rank()));
        }
        let mut chars = trimmed.chars().peekable();
        while let Some(c) = chars.next() {
            if c.is_whitespace() {
                continue;
            }
            if c == '⁻' {
                match (chars.next(), letters.last_mut()) {
                    (Some('¹'), Some(last)) => {
                        *last = last.inv();
                        continue;
                    }
                    (found, _) => {
                        return Err(Error::ParseWord { input: input.into(), found: found.unwrap_or(c) })
                    }
                }
            }
            if c == '^' {
                match (chars.next(), chars.next(), letters.last_mut()) {
                    (Some('-'), Some('1'), Some(last)) => {
                        *last = last.inv();
                        continue;
                    }
                    _ => return Err(Error::ParseWord { input: input.into(), found: c }),
                }
            }
            let l = alphabet
                .lookup(c)
                .ok_or_else(|| Error::ParseWord { input: input.into(), found: c })?;
            letters.push(l);
        }
        FreeWord::new(alphabet.rank(), letters)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != p[1].inv())
    }

    pub fn reduced(&self) -> Self {
        free_reduce(self)
    }

    /// Formal inverse: letters reversed and inverted.
    pub fn inverse(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Concatenation followed by free reduction.
    pub fn mul(&self, other: &FreeWord) -> Self {
        debug_assert_eq!(self.rank, other.rank);
        let mut out = Vec::with_capacity(self.len() + other.len());
        for &l in self.letters.iter().chain(&other.letters) {
            push_reducing(&mut out, l);
        }
        FreeWord { rank: self.rank, letters: out }
    }

    /// Concatenation without reduction.
    pub fn concat(&self, other: &FreeWord) -> Self {
        debug_assert_eq!(self.rank, other.rank);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { rank: self.rank, letters }
    }

    pub fn push(&mut self, l: Letter) {
        assert!((l.gen as usize) < self.rank);
        self.letters.push(l);
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::empty(self.rank);
        for _ in 0..exp.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g⁻¹ · self · g`.
    pub fn conj(&self, g: &FreeWord) -> Self {
        g.inverse().mul(self).mul(g)
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &FreeWord) -> Self {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    /// True when the word is literally `v·v` for some word `v`.
    pub fn is_square(&self) -> bool {
        let n = self.letters.len();
        n.is_multiple_of(2) && self.letters[..n / 2] == self.letters[n / 2..]
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        WordDisplay { word: self, alphabet }
    }
}

struct WordDisplay<'a> {
    word: &'a FreeWord,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.word.letters {
            write!(f, "{}", self.alphabet.render(l))?;
        }
        Ok(())
    }
}

fn push_reducing(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

pub fn free_reduce(w: &FreeWord) -> FreeWord {
    let mut out = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        push_reducing(&mut out, l);
    }
    FreeWord { rank: w.rank, letters: out }
}

/// Number of freely reduced words of length at most `max_len` in `F_rank`.
pub fn reduced_word_count(rank: usize, max_len: usize) -> u128 {
    let k = rank as u128;
    let mut total = 1u128;
    let mut sphere = 2 * k;
    for _ in 1..=max_len {
        total += sphere;
        sphere *= 2 * k - 1;
    }
    total
}

/// Every freely reduced word of length `≤ max_len`, in length-then-lex order.
pub fn enumerate_reduced(rank: usize, max_len: usize) -> ReducedWords {
    ReducedWords::new(rank, max_len, (0..2 * rank).collect())
}

/// Like [`enumerate_reduced`] but only over the given letter indices (see
/// [`Letter::index`]). Order is still length-then-lex.
pub fn enumerate_reduced_over(rank: usize, max_len: usize, letters: &[Letter]) -> ReducedWords {
    let mut idx: Vec<usize> = letters.iter().map(|l| l.index()).collect();
    idx.sort_unstable();
    idx.dedup();
    ReducedWords::new(rank, max_len, idx)
}

/// Iterator returned by [`enumerate_reduced`].
pub struct ReducedWords {
    rank: usize,
    max_len: usize,
    alphabet: Vec<usize>,
    // positions into `alphabet`
    current: Option<Vec<usize>>,
    done: bool,
}

impl ReducedWords {
    fn new(rank: usize, max_len: usize, alphabet: Vec<usize>) -> Self {
        ReducedWords { rank, max_len, alphabet, current: None, done: false }
    }

    fn cancels(&self, prev: usize, next: usize) -> bool {
        let (p, n) = (self.alphabet[prev], self.alphabet[next]);
        p != n && p / 2 == n / 2
    }

    fn smallest_after(&self, prev: Option<usize>, from: usize) -> Option<usize> {
        (from..self.alphabet.len()).find(|&j| prev.is_none_or(|p| !self.cancels(p, j)))
    }

    fn fill_minimal(&self, word: &mut Vec<usize>, from: usize, len: usize) -> bool {
        word.truncate(from);
        while word.len() < len {
            match self.smallest_after(word.last().copied(), 0) {
                Some(j) => word.push(j),
                None => return false,
            }
        }
        true
    }

    fn advance_in_place(&mut self) -> bool {
        let mut word = self.current.take().unwrap_or_default();
        let ok = self.advance(&mut word);
        self.current = Some(word);
        ok
    }

    fn advance(&self, word: &mut Vec<usize>) -> bool {
        let len = word.len();
        for p in (0..len).rev() {
            let prev = if p == 0 { None } else { Some(word[p - 1]) };
            if let Some(j) = self.smallest_after(prev, word[p] + 1) {
                word[p] = j;
                if self.fill_minimal(word, p + 1, len) {
                    return true;
                }
            }
        }
        // next length
        let mut next = Vec::new();
        let mut l = len + 1;
        while l <= self.max_len {
            if self.fill_minimal(&mut next, 0, l) {
                *word = next;
                return true;
            }
            l += 1;
        }
        false
    }
}

impl Iterator for ReducedWords {
    type Item = FreeWord;

    fn next(&mut self) -> Option<FreeWord> {
        if self.done {
            return None;
        }
        if self.current.is_none() {
            self.current = Some(Vec::new());
        } else if !self.advance_in_place() {
            self.done = true;
            return None;
        }
        let idx = self.current.as_ref().expect("current word");
        Some(FreeWord {
            rank: self.rank,
            letters: idx.iter().map(|&j| Letter::from_index(self.alphabet[j])).collect(),
        })
    }
}

/// A letter of the Grigorchuk alphabet. Every letter is an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::B, Gen::C, Gen::D];
    pub const BCD: [Gen; 3] = [Gen::B, Gen::C, Gen::D];

    pub fn from_char(c: char) -> Option<Gen> {
        match c.to_ascii_lowercase() {
            'a' => Some(Gen::A),
            'b' => Some(Gen::B),
            'c' => Some(Gen::C),
            'd' => Some(Gen::D),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
            Gen::C => 'c',
            Gen::D => 'd',
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(i: u8) -> Gen {
        Gen::ALL[i as usize]
    }
}

// Products inside the four-group {e, b, c, d}; row/column order b, c, d.
// `None` is the identity.
const KLEIN: [[Option<Gen>; 3]; 3] = [
    [None, Some(Gen::D), Some(Gen::C)],
    [Some(Gen::D), None, Some(Gen::B)],
    [Some(Gen::C), Some(Gen::B), None],
];

/// Product of two letters from `{b, c, d}`; `None` is the identity.
pub fn klein_product(x: Gen, y: Gen) -> Option<Gen> {
    debug_assert!(x != Gen::A && y != Gen::A);
    KLEIN[x as usize - 1][y as usize - 1]
}

/// A word over `{a, b, c, d}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenWord(pub Vec<Gen>);

impl GenWord {
    pub fn new() -> Self {
        GenWord(Vec::new())
    }

    /// Parses a string of `a b c d` letters; case and whitespace are ignored.
    /// `1` alone is the empty word.
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim() == "1" {
            return Ok(GenWord::new());
        }
        input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Gen::from_char(c).ok_or_else(|| Error::ParseWord { input: input.into(), found: c }))
            .collect::<Result<Vec<_>>>()
            .map(GenWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn push(&mut self, g: Gen) {
        self.0.push(g)
    }

    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        GenWord(v)
    }

    /// Group inverse: every letter is an involution, so this is the reversal.
    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().copied().collect())
    }

    pub fn count_a(&self) -> usize {
        self.0.iter().filter(|&&g| g == Gen::A).count()
    }

    pub fn pow(&self, n: usize) -> GenWord {
        GenWord(self.0.repeat(n))
    }

    /// `g⁻¹ · self · g`.
    pub fn conj(&self, g: &GenWord) -> GenWord {
        g.inverse().concat(self).concat(g)
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &GenWord) -> GenWord {
        self.inverse().concat(&other.inverse()).concat(self).concat(other)
    }

    pub fn is_alternating(&self) -> bool {
        self.0.windows(2).all(|p| (p[0] == Gen::A) != (p[1] == Gen::A))
    }

    /// Interprets a rank-4 free word with generators `a, b, c, d`. Inverse
    /// letters map to the letter itself.
    pub fn from_free(w: &FreeWord) -> Result<GenWord> {
        if w.rank() != 4 {
            return Err(Error::RankMismatch(w.rank(), 4));
        }
        Ok(GenWord(w.letters().iter().map(|l| Gen::from_index(l.gen)).collect()))
    }

    pub fn to_free(&self) -> FreeWord {
        FreeWord { rank: 4, letters: self.0.iter().map(|g| Letter::pos(g.index())).collect() }
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

/// Reduces modulo `a² = b² = c² = d² = bcd = e`. The result alternates between
/// `a` and letters of `{b, c, d}`.
pub fn klein_reduce(w: &GenWord) -> GenWord {
    let mut out: Vec<Gen> = Vec::with_capacity(w.len());
    for &g in &w.0 {
        match out.last().copied() {
            Some(top) if top == g => {
                out.pop();
            }
            Some(top) if top != Gen::A && g != Gen::A => {
                // distinct letters of {b,c,d}: the product is the third one
                *out.last_mut().unwrap() = klein_product(top, g).expect("distinct letters");
            }
            _ => out.push(g),
        }
    }
    GenWord(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fw(s: &str) -> FreeWord {
        FreeWord::parse(s, &Alphabet::new("xy")).unwrap()
    }

    #[test]
    fn free_reduce_cancels() {
        assert!(free_reduce(&fw("xX")).is_empty());
        assert_eq!(free_reduce(&fw("xyYx")), fw("xx"));
        assert!(free_reduce(&FreeWord::empty(2)).is_empty());
        assert_eq!(free_reduce(&fw("xyY X")), FreeWord::empty(2));
    }

    #[test]
    fn parse_inverse_notations() {
        assert_eq!(fw("x^-1 y"), fw("Xy"));
        assert_eq!(fw("x⁻¹y"), fw("Xy"));
        assert_eq!(fw("1"), FreeWord::empty(2));
        assert!(FreeWord::parse("xz", &Alphabet::new("xy")).is_err());
        assert_eq!(fw("xYy").display(&Alphabet::new("xy")).to_string(), "xYy");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reduced(2, 0).count(), 1);
        assert_eq!(enumerate_reduced(2, 1).count(), 5);
        assert_eq!(enumerate_reduced(2, 2).count(), 17);
        for k in 1..=3 {
            for l in 0..=6 {
                let words: Vec<_> = enumerate_reduced(k, l).collect();
                assert_eq!(words.len() as u128, reduced_word_count(k, l), "k={k} l={l}");
                assert!(words.iter().all(|w| w.is_reduced() && w.len() <= l));
                let mut sorted = words.clone();
                sorted.sort_by(|a, b| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
                assert_eq!(sorted, words, "order k={k} l={l}");
                sorted.dedup();
                assert_eq!(sorted.len(), words.len());
            }
        }
    }

    #[test]
    fn enumeration_over_subalphabet() {
        let pos: Vec<Letter> = (0..4).map(Letter::pos).collect();
        // no adjacent inverse pairs are possible, so every word is reduced
        assert_eq!(enumerate_reduced_over(4, 2, &pos).count(), 1 + 4 + 16);
    }

    #[test]
    fn enumeration_first_words() {
        let a = Alphabet::new("xy");
        let first: Vec<String> = enumerate_reduced(2, 2).take(7).map(|w| w.display(&a).to_string()).collect();
        assert_eq!(first, ["1", "x", "X", "y", "Y", "xx", "xy"]);
    }

    #[test]
    fn klein_examples() {
        let k = |s: &str| klein_reduce(&GenWord::parse(s).unwrap()).to_string();
        assert_eq!(k("bc"), "d");
        assert_eq!(k("aa"), "1");
        assert_eq!(k("abba"), "1");
        assert_eq!(k("bcd"), "1");
        let r = klein_reduce(&GenWord::parse("adab bda").unwrap());
        assert!(r.len() <= 5 && r.is_alternating());
        assert_eq!(r.to_string(), "adada");
    }

    #[test]
    fn klein_table_is_the_four_group() {
        for x in Gen::BCD {
            for y in Gen::BCD {
                let p = klein_product(x, y);
                assert_eq!(p.is_none(), x == y);
                assert_eq!(p, klein_product(y, x));
                if let Some(z) = p {
                    assert!(z != x && z != y);
                }
            }
        }
    }

    #[test]
    fn square_detection() {
        assert!(fw("xyxy").is_square());
        assert!(fw("1").is_square());
        assert!(!fw("xyx").is_square());
        assert!(!fw("xyyx").is_square());
    }
}
