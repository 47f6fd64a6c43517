use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

use super::sequence::{in_difference_set, SSpec};

/// A word in a graph product of copies of `ℤ_n` indexed by integers:
/// syllables `(vertex, exponent)` with exponents in `1..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GPWord {
    modulus: u32,
    syllables: Vec<(i64, u32)>,
}

impl GPWord {
    /// Exponents are taken mod `modulus`; zero syllables are dropped.
    pub fn new(modulus: u32, syllables: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        let syllables = syllables
            .into_iter()
            .map(|(v, e)| (v, e.rem_euclid(modulus as i64) as u32))
            .filter(|&(_, e)| e != 0)
            .collect();
        Ok(GPWord { modulus, syllables })
    }

    pub fn empty(modulus: u32) -> Self {
        GPWord { modulus, syllables: Vec::new() }
    }

    pub fn syllable(modulus: u32, vertex: i64, exp: i64) -> Result<Self> {
        GPWord::new(modulus, [(vertex, exp)])
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn syllables(&self) -> &[(i64, u32)] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn concat(&self, other: &GPWord) -> Result<GPWord> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        Ok(GPWord { modulus: self.modulus, syllables })
    }

    /// Formal inverse: reversed syllables with negated exponents.
    pub fn inverse(&self) -> GPWord {
        let n = self.modulus;
        GPWord { modulus: n, syllables: self.syllables.iter().rev().map(|&(v, e)| (v, n - e)).collect() }
    }

    /// Shifts every vertex by `z`.
    pub fn translate(&self, z: i64) -> GPWord {
        GPWord { modulus: self.modulus, syllables: self.syllables.iter().map(|&(v, e)| (v + z, e)).collect() }
    }
}

impl fmt::Display for GPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{v}^{e}")?;
        }
        Ok(())
    }
}

/// Normal form in the graph product where distinct vertices `u`, `v` commute
/// iff `adjacent(u, v)`.
///
/// Syllables are inserted left to right, each merging with the nearest
/// same-vertex syllable it can be shuffled next to. The result is reduced, so
/// it is empty iff the word is trivial. Reduced words are then put in the
/// lexicographically least shuffle by repeatedly pulling the smallest vertex
/// that commutes past everything before it.
pub fn gp_reduce(w: &GPWord, adjacent: impl Fn(i64, i64) -> bool) -> Result<GPWord> {
    let mut verts: Vec<i64> = w.syllables.iter().map(|s| s.0).collect();
    verts.sort_unstable();
    verts.dedup();
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            if adjacent(u, v) != adjacent(v, u) {
                return Err(Error::NonSymmetricAdjacency(u, v));
            }
        }
    }
    let commute = |u: i64, v: i64| u == v || adjacent(u, v);
    let n = w.modulus;

    let mut out: Vec<(i64, u32)> = Vec::with_capacity(w.len());
    for &(v, e) in &w.syllables {
        let mut merged = false;
        for i in (0..out.len()).rev() {
            if out[i].0 == v {
                let sum = (out[i].1 + e) % n;
                if sum == 0 {
                    out.remove(i);
                } else {
                    out[i].1 = sum;
                }
                merged = true;
                break;
            }
            if !commute(out[i].0, v) {
                break;
            }
        }
        if !merged {
            out.push((v, e));
        }
    }

    let mut sorted = Vec::with_capacity(out.len());
    while !out.is_empty() {
        let pick = (0..out.len())
            .filter(|&i| out[..i].iter().all(|s| commute(s.0, out[i].0)))
            .min_by_key(|&i| out[i].0)
            .expect("the first syllable is always movable");
        sorted.push(out.remove(pick));
    }
    Ok(GPWord { modulus: n, syllables: sorted })
}

/// Whether vertices `v1 ≠ v2` are joined in the graph `T_S` on `ℤ`, i.e.
/// whether `v1 - v2 ∈ S - S`.
pub fn ts_adjacent(v1: i64, v2: i64, spec: &SSpec) -> Result<bool> {
    if v1 == v2 {
        return Err(Error::SelfAdjacency(v1));
    }
    Ok(in_difference_set(v1 - v2, spec))
}

/// Element `(w, z)` of the circle product `K ⋊ ℤ`, where `K` is the graph
/// product over `T_S` and `z` acts by translating vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WElement {
    pub word: GPWord,
    pub shift: i64,
}

impl WElement {
    pub fn identity(modulus: u32) -> Self {
        WElement { word: GPWord::empty(modulus), shift: 0 }
    }

    /// The vertex generator at `0`.
    pub fn x(modulus: u32) -> Self {
        WElement { word: GPWord { modulus, syllables: vec![(0, 1)] }, shift: 0 }
    }

    /// The generator of `ℤ`.
    pub fn y(modulus: u32) -> Self {
        WElement { word: GPWord::empty(modulus), shift: 1 }
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty() && self.shift == 0
    }

    /// `(w, z)⁻¹ = (translate(w⁻¹, -z), -z)`, not reduced.
    pub fn formal_inverse(&self) -> WElement {
        WElement { word: self.word.inverse().translate(-self.shift), shift: -self.shift }
    }
}

/// `(w₁, z₁)(w₂, z₂) = (w₁ · translate(w₂, z₁), z₁ + z₂)`, reduced.
///
/// With this law `y^{-i} x y^{i}` is the vertex generator at `-i`.
pub fn w_multiply(u: &WElement, v: &WElement, spec: &SSpec) -> Result<WElement> {
    let word = u.word.concat(&v.word.translate(u.shift))?;
    Ok(WElement { word: gp_reduce(&word, |a, b| a != b && in_difference_set(a - b, spec))?, shift: u.shift + v.shift })
}

pub fn w_inverse(u: &WElement, spec: &SSpec) -> Result<WElement> {
    w_multiply(&WElement::identity(u.word.modulus()), &u.formal_inverse(), spec)
}

pub fn w_pow(u: &WElement, exp: i64, spec: &SSpec) -> Result<WElement> {
    let base = if exp < 0 { w_inverse(u, spec)? } else { u.clone() };
    let mut acc = WElement::identity(u.word.modulus());
    for _ in 0..exp.unsigned_abs() {
        acc = w_multiply(&acc, &base, spec)?;
    }
    Ok(acc)
}

/// `g⁻¹ h⁻¹ g h`.
pub fn w_commutator(g: &WElement, h: &WElement, spec: &SSpec) -> Result<WElement> {
    let gi = w_inverse(g, spec)?;
    let hi = w_inverse(h, spec)?;
    let a = w_multiply(&gi, &hi, spec)?;
    let b = w_multiply(&a, g, spec)?;
    w_multiply(&b, h, spec)
}

/// Whether `[x, x^{y^i}]` is trivial in the circle product with vertex group
/// `ℤ_n`.
pub fn commutator_trivial(i: i64, spec: &SSpec, modulus: u32) -> Result<bool> {
    if i == 0 {
        return Err(Error::InvalidArgument("commutator index must be nonzero".into()));
    }
    let x = WElement::x(modulus);
    let yi = w_pow(&WElement::y(modulus), i, spec)?;
    let conj = w_multiply(&w_multiply(&w_inverse(&yi, spec)?, &x, spec)?, &yi, spec)?;
    Ok(w_commutator(&x, &conj, spec)?.is_identity())
}

/// Decides triviality of a word in the right-angled Coxeter group on the
/// vertices of `window` through integer reflection matrices. Distinct
/// vertices pair to `0` when adjacent and `-1` otherwise.
pub fn racg_matrix_oracle(
    w: &GPWord,
    window: RangeInclusive<i64>,
    adjacent: impl Fn(i64, i64) -> bool,
) -> Result<bool> {
    if w.modulus != 2 {
        return Err(Error::ModulusMismatch(w.modulus, 2));
    }
    if let Some(&(v, _)) = w.syllables.iter().find(|(v, _)| !window.contains(v)) {
        return Err(Error::VertexOutsideWindow(v));
    }
    let lo = *window.start();
    let dim = (window.end() - lo + 1).max(0) as usize;
    // row v of the reflection at v, minus the identity row
    let delta = |v: usize| -> Vec<i64> {
        (0..dim)
            .map(|u| {
                let b = if u == v {
                    1
                } else if adjacent(lo + v as i64, lo + u as i64) {
                    0
                } else {
                    -1
                };
                -2 * b
            })
            .collect()
    };
    let mut m: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
    for &(v, _) in &w.syllables {
        let v = (v - lo) as usize;
        let d = delta(v);
        for row in m.iter_mut() {
            let mv = row[v];
            for (x, dx) in row.iter_mut().zip(&d) {
                *x = mv.checked_mul(*dx).and_then(|p| x.checked_add(p)).ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec2() -> SSpec {
        SSpec::corrected(2).unwrap()
    }

    fn adj(spec: SSpec) -> impl Fn(i64, i64) -> bool {
        move |a, b| a != b && in_difference_set(a - b, &spec)
    }

    #[test]
    fn inverse_syllables_cancel() {
        let w = GPWord::new(5, [(3, 1), (3, 4)]).unwrap();
        assert!(gp_reduce(&w, |_, _| false).unwrap().is_empty());
        let w = GPWord::new(3, [(3, 1), (3, 1)]).unwrap();
        assert_eq!(gp_reduce(&w, |_, _| false).unwrap().syllables(), [(3, 2)]);
    }

    #[test]
    fn commutators_of_vertices() {
        let s = spec2();
        let comm = |u, v| GPWord::new(2, [(u, 1), (v, 1), (u, 1), (v, 1)]).unwrap();
        assert!(gp_reduce(&comm(0, 1), adj(s)).unwrap().is_empty());
        let c = comm(0, 2);
        assert_eq!(gp_reduce(&c, adj(s)).unwrap().len(), 4);
        assert!(!racg_matrix_oracle(&c, 0..=2, adj(s)).unwrap());
        assert!(racg_matrix_oracle(&comm(0, 1), 0..=2, adj(s)).unwrap());
        assert!(racg_matrix_oracle(&GPWord::empty(2), 0..=2, adj(s)).unwrap());
        assert!(!racg_matrix_oracle(&GPWord::syllable(2, 1, 1).unwrap(), 0..=2, adj(s)).unwrap());
    }

    #[test]
    fn shuffles_reach_merges() {
        // x0 x1 x0 with 0, 1 commuting collapses to x1
        let w = GPWord::new(2, [(0, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(gp_reduce(&w, adj(spec2())).unwrap().syllables(), [(1, 1)]);
        // x2 x0 sorts to x0 x2 only when they commute
        let w = GPWord::new(2, [(2, 1), (1, 1)]).unwrap();
        assert_eq!(gp_reduce(&w, adj(spec2())).unwrap().syllables(), [(1, 1), (2, 1)]);
        let w = GPWord::new(2, [(2, 1), (0, 1)]).unwrap();
        assert_eq!(gp_reduce(&w, adj(spec2())).unwrap().syllables(), [(2, 1), (0, 1)]);
    }

    #[test]
    fn rejects_asymmetric_graphs() {
        let w = GPWord::new(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(gp_reduce(&w, |a, b| a < b), Err(Error::NonSymmetricAdjacency(0, 1)));
        assert_eq!(ts_adjacent(4, 4, &spec2()), Err(Error::SelfAdjacency(4)));
        assert!(ts_adjacent(5, 4, &spec2()).unwrap());
        assert!(!ts_adjacent(2, 0, &spec2()).unwrap());
    }

    #[test]
    fn circle_product_elements() {
        let s = spec2();
        let y = WElement::y(2);
        assert!(w_multiply(&y, &w_inverse(&y, &s).unwrap(), &s).unwrap().is_identity());
        let x = WElement::x(2);
        assert!(w_multiply(&x, &x, &s).unwrap().is_identity());
        let y3 = w_pow(&y, 3, &s).unwrap();
        let conj = w_multiply(&w_multiply(&w_inverse(&y3, &s).unwrap(), &x, &s).unwrap(), &y3, &s).unwrap();
        assert_eq!(conj, WElement { word: GPWord::syllable(2, -3, 1).unwrap(), shift: 0 });
    }

    #[test]
    fn commutator_pattern() {
        let s = spec2();
        assert!(commutator_trivial(1, &s, 2).unwrap());
        assert!(!commutator_trivial(2, &s, 2).unwrap());
        assert!(!commutator_trivial(-2, &s, 2).unwrap());
        assert!(commutator_trivial(7, &s, 3).unwrap());
    }
}
