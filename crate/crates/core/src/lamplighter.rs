//! Normal forms for the lamplighter group `ℤ_n ≀ ℤ = ⟨s, t⟩` and for the
//! extension `L ⋊ ℤ₂` that models `G_{000…}`.
//!
//! An element is a finitely supported lamp configuration `f: ℤ → ℤ_n` and a
//! shift `z`, multiplied by `(f₁, z₁)(f₂, z₂) = (f₁ + f₂(· − z₁), z₁ + z₂)`.
//! Then `s` is the lamp at `0`, `t` is the unit shift, and `t^k s t^{-k}` is
//! the lamp at `k`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grigorchuk::route_constant;
use crate::words::{Alphabet, FreeWord, Gen, GenWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampElement {
    modulus: u32,
    // nonzero residues only
    lamps: BTreeMap<i64, u32>,
    shift: i64,
}

impl LampElement {
    pub fn identity(modulus: u32) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        LampElement { modulus, lamps: BTreeMap::new(), shift: 0 }
    }

    pub fn new(modulus: u32, lamps: impl IntoIterator<Item = (i64, u32)>, shift: i64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        let mut e = LampElement { modulus, lamps: BTreeMap::new(), shift };
        for (pos, val) in lamps {
            e.add_lamp(pos, val % modulus);
        }
        Ok(e)
    }

    /// `s`: one lamp lit at position 0.
    pub fn s(modulus: u32) -> Self {
        LampElement::lamp(modulus, 0, 1)
    }

    /// `t`: the unit shift.
    pub fn t(modulus: u32) -> Self {
        LampElement { shift: 1, ..LampElement::identity(modulus) }
    }

    pub fn lamp(modulus: u32, pos: i64, val: u32) -> Self {
        let mut e = LampElement::identity(modulus);
        e.add_lamp(pos, val % modulus);
        e
    }

    fn add_lamp(&mut self, pos: i64, val: u32) {
        let n = self.modulus;
        let cur = self.lamps.get(&pos).copied().unwrap_or(0);
        let next = (cur + val) % n;
        if next == 0 {
            self.lamps.remove(&pos);
        } else {
            self.lamps.insert(pos, next);
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn lamps(&self) -> &BTreeMap<i64, u32> {
        &self.lamps
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.lamps.is_empty()
    }

    /// Product, panicking on modulus mismatch. See [`lamp_multiply`].
    pub fn mul(&self, other: &LampElement) -> LampElement {
        lamp_multiply(self, other).expect("equal moduli")
    }

    pub fn inverse(&self) -> LampElement {
        let n = self.modulus;
        let lamps = self.lamps.iter().map(|(&p, &v)| (p - self.shift, n - v)).collect();
        LampElement { modulus: n, lamps, shift: -self.shift }
    }

    pub fn pow(&self, exp: i64) -> LampElement {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        (0..exp.unsigned_abs()).fold(LampElement::identity(self.modulus), |acc, _| acc.mul(&base))
    }

    /// `g⁻¹ · self · g`.
    pub fn conj(&self, g: &LampElement) -> LampElement {
        g.inverse().mul(self).mul(g)
    }

    /// `self⁻¹ · other⁻¹ · self · other`.
    pub fn commutator(&self, other: &LampElement) -> LampElement {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }
}

impl fmt::Display for LampElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("lamps:{")?;
        for (i, (p, v)) in self.lamps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}:{v}")?;
        }
        write!(f, "}} shift:{}", self.shift)
    }
}

pub fn lamp_multiply(u: &LampElement, v: &LampElement) -> Result<LampElement> {
    if u.modulus != v.modulus {
        return Err(Error::ModulusMismatch(u.modulus, v.modulus));
    }
    let mut out = u.clone();
    for (&p, &val) in &v.lamps {
        out.add_lamp(p + u.shift, val);
    }
    out.shift += v.shift;
    Ok(out)
}

/// The involution induced by conjugation with `a`: `s ↦ t s t⁻¹`,
/// `t ↦ t⁻¹`. On normal forms it reflects lamps `p ↦ 1 − p` and negates the
/// shift.
pub fn alpha(u: &LampElement) -> LampElement {
    LampElement {
        modulus: u.modulus,
        lamps: u.lamps.iter().map(|(&p, &v)| (1 - p, v)).collect(),
        shift: -u.shift,
    }
}

/// Automorphism of `L` used to twist the `ℤ₂` factor.
pub type Twist = fn(&LampElement) -> LampElement;

/// The standard twist, [`alpha`].
pub const ALPHA: Twist = alpha;

pub fn st_alphabet() -> Alphabet {
    Alphabet::new("st")
}

/// Evaluates a word over `s = x₀`, `t = x₁` in `ℤ_n ≀ ℤ`.
pub fn eval_st_word(w: &FreeWord, modulus: u32) -> Result<LampElement> {
    if w.rank() != 2 {
        return Err(Error::RankMismatch(w.rank(), 2));
    }
    if modulus < 2 {
        return Err(Error::BadModulus(modulus));
    }
    let gens = [LampElement::s(modulus), LampElement::t(modulus)];
    let invs = [gens[0].inverse(), gens[1].inverse()];
    Ok(w.letters().iter().fold(LampElement::identity(modulus), |acc, l| {
        acc.mul(if l.inverse { &invs[l.gen as usize] } else { &gens[l.gen as usize] })
    }))
}

/// The relator `sⁿ`.
pub fn power_relator(modulus: u32) -> FreeWord {
    FreeWord::new(2, vec![Letter::pos(0); modulus as usize]).expect("rank 2")
}

/// The relator `r_i = [s, s^{tⁱ}] = s⁻¹ t⁻ⁱ s⁻¹ tⁱ s t⁻ⁱ s tⁱ`.
pub fn commutator_relator(i: i64) -> FreeWord {
    let s = FreeWord::generator(2, 0);
    let t = FreeWord::generator(2, 1);
    s.commutator(&s.conj(&t.pow(i)))
}

/// An element of `L ⋊ ℤ₂`: `(u, ε)` stands for `u · a^ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtLampElement {
    pub base: LampElement,
    pub flip: bool,
}

impl ExtLampElement {
    pub fn identity(modulus: u32) -> Self {
        ExtLampElement { base: LampElement::identity(modulus), flip: false }
    }

    pub fn from_base(base: LampElement) -> Self {
        ExtLampElement { base, flip: false }
    }

    /// The image of `a`.
    pub fn flip(modulus: u32) -> Self {
        ExtLampElement { base: LampElement::identity(modulus), flip: true }
    }

    pub fn is_identity(&self) -> bool {
        !self.flip && self.base.is_identity()
    }

    pub fn mul(&self, other: &ExtLampElement) -> ExtLampElement {
        ext_multiply_with(self, other, ALPHA).expect("equal moduli")
    }

    pub fn inverse(&self) -> ExtLampElement {
        ext_inverse_with(self, ALPHA)
    }
}

impl fmt::Display for ExtLampElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} flip:{}", self.base, self.flip as u8)
    }
}

/// `(u, ε₁)(v, ε₂) = (u · α^{ε₁}(v), ε₁ ⊕ ε₂)`.
pub fn ext_multiply(u: &ExtLampElement, v: &ExtLampElement) -> Result<ExtLampElement> {
    ext_multiply_with(u, v, ALPHA)
}

pub fn ext_multiply_with(u: &ExtLampElement, v: &ExtLampElement, twist: Twist) -> Result<ExtLampElement> {
    let right = if u.flip { twist(&v.base) } else { v.base.clone() };
    Ok(ExtLampElement { base: lamp_multiply(&u.base, &right)?, flip: u.flip ^ v.flip })
}

fn ext_inverse_with(u: &ExtLampElement, twist: Twist) -> ExtLampElement {
    // (u, 1)⁻¹ = (α(u⁻¹), 1)
    let inv = u.base.inverse();
    ExtLampElement { base: if u.flip { twist(&inv) } else { inv }, flip: u.flip }
}

/// Images of `a, b, c, d` for `G_{000…}` under the given twist:
/// `a ↦ (1, 1)`, `d ↦ (s, 0)`, `b ↦ a·t`, `c ↦ b·d`.
pub fn abcd_images(twist: Twist) -> [ExtLampElement; 4] {
    let a = ExtLampElement::flip(2);
    let t = ExtLampElement::from_base(LampElement::t(2));
    let d = ExtLampElement::from_base(LampElement::s(2));
    let b = ext_multiply_with(&a, &t, twist).expect("modulus 2");
    let c = ext_multiply_with(&b, &d, twist).expect("modulus 2");
    [a, b, c, d]
}

/// Evaluates a word of `G_{sss…}` in `L ⋊ ℤ₂`, where `dead` is the letter
/// whose table entry at `s` is `e` (see [`route_constant`]).
pub fn eval_abcd_word(w: &GenWord, dead: Gen) -> ExtLampElement {
    eval_abcd_word_with(w, dead, ALPHA)
}

pub fn eval_abcd_word_with(w: &GenWord, dead: Gen, twist: Twist) -> ExtLampElement {
    let images = abcd_images(twist);
    let symbol = match dead {
        Gen::D => 0,
        Gen::C => 1,
        Gen::B => 2,
        Gen::A => panic!("`a` is never a dead letter"),
    };
    let route = route_constant(symbol);
    w.letters().iter().fold(ExtLampElement::identity(2), |acc, &g| {
        ext_multiply_with(&acc, &images[route.relabel(g) as usize], twist).expect("modulus 2")
    })
}

/// Whether `a², b², c², d²` and `bcd` all evaluate to the identity.
pub fn dictionary_holds(twist: Twist) -> bool {
    ["aa", "bb", "cc", "dd", "bcd"].iter().all(|r| {
        let w = GenWord::parse(r).expect("static word");
        [Gen::B, Gen::C, Gen::D].iter().all(|&dead| eval_abcd_word_with(&w, dead, twist).is_identity())
    })
}

/// `t_n = d^{(ab)^n}` for `n ≥ 0` and `d^{(ab)^{-n-1} a}` for `n < 0`.
pub fn t_n_word(n: i64) -> GenWord {
    let d = GenWord::parse("d").expect("static word");
    let ab = GenWord::parse("ab").expect("static word");
    if n >= 0 {
        d.conj(&ab.pow(n as usize))
    } else {
        let mut g = ab.pow((-n - 1) as usize);
        g.push(Gen::A);
        d.conj(&g)
    }
}

pub fn lamp_t_n(n: i64) -> ExtLampElement {
    eval_abcd_word(&t_n_word(n), Gen::D)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub window: i64,
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn random_lamp(rng: &mut ChaCha8Rng, modulus: u32, spread: i64) -> LampElement {
    let count = rng.gen_range(0..6);
    let lamps: Vec<(i64, u32)> =
        (0..count).map(|_| (rng.gen_range(-spread..=spread), rng.gen_range(1..modulus))).collect();
    LampElement::new(modulus, lamps, rng.gen_range(-spread..=spread)).expect("modulus ≥ 2")
}

fn random_ext(rng: &mut ChaCha8Rng, spread: i64) -> ExtLampElement {
    ExtLampElement { base: random_lamp(rng, 2, spread), flip: rng.gen() }
}

/// Checks the structure of `D = ⟨⟨d⟩⟩` and `K = D ⋊ ⟨ab⟩` in the model for
/// `|i|, |j| ≤ window`.
pub fn structure_report(window: i64) -> StructureReport {
    structure_report_with(window, ALPHA)
}

pub fn structure_report_with(window: i64, twist: Twist) -> StructureReport {
    let mul = |u: &ExtLampElement, v: &ExtLampElement| ext_multiply_with(u, v, twist).expect("modulus 2");
    let inv = |u: &ExtLampElement| ext_inverse_with(u, twist);
    let eval = |w: &GenWord| eval_abcd_word_with(w, Gen::D, twist);
    let range: Vec<i64> = (-window..=window).collect();
    let t: Vec<ExtLampElement> = (-window..=window + 1).map(|i| eval(&t_n_word(i))).collect();
    let ti = |i: i64| &t[(i + window) as usize];
    let ab = eval(&GenWord::parse("ab").expect("static word"));
    let mut checks = Vec::new();

    let distinct: HashSet<&ExtLampElement> = range.iter().map(|&i| ti(i)).collect();
    checks.push(Check {
        name: "t_n pairwise distinct",
        pass: distinct.len() == range.len(),
        detail: format!("{} distinct of {}", distinct.len(), range.len()),
    });

    let bad_comm = range
        .iter()
        .flat_map(|&i| range.iter().map(move |&j| (i, j)))
        .find(|&(i, j)| !mul(&mul(&inv(ti(i)), &inv(ti(j))), &mul(ti(i), ti(j))).is_identity());
    checks.push(Check {
        name: "D abelian",
        pass: bad_comm.is_none(),
        detail: bad_comm.map_or("all commutators trivial".into(), |(i, j)| format!("[t_{i}, t_{j}] != e")),
    });

    let bad_shift = range.iter().copied().find(|&i| mul(&mul(&inv(&ab), ti(i)), &ab) != *ti(i + 1));
    checks.push(Check {
        name: "t_n^(ab) = t_(n+1)",
        pass: bad_shift.is_none(),
        detail: bad_shift.map_or("shift acts on the t_n".into(), |i| format!("fails at n = {i}")),
    });

    let in_d = |g: &ExtLampElement| !g.flip && g.base.shift() == 0;
    let mut power = ExtLampElement::identity(2);
    let mut bad_power = None;
    for n in 1..=window {
        power = mul(&power, &ab);
        if in_d(&power) || in_d(&inv(&power)) {
            bad_power = Some(n);
            break;
        }
    }
    let t_in_d = range.iter().all(|&i| in_d(ti(i)));
    checks.push(Check {
        name: "D meets <ab> trivially",
        pass: bad_power.is_none() && t_in_d,
        detail: match (bad_power, t_in_d) {
            (Some(n), _) => format!("(ab)^{n} has shift 0"),
            (None, false) => "some t_n has nonzero shift or flip".into(),
            _ => "t-words have shift 0, nonzero powers of ab do not".into(),
        },
    });

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a4b);
    let a = eval(&GenWord::parse("a").expect("static word"));
    let mut bad_factor = None;
    for _ in 0..200 {
        let g = random_ext(&mut rng, window.max(1));
        let k = if g.flip { mul(&g, &a) } else { g.clone() };
        let back = if g.flip { mul(&k, &a) } else { k.clone() };
        let other = if g.flip { g.clone() } else { mul(&g, &a) };
        // k written as a product of t_n's times (ab)^z
        let mut rebuilt = ExtLampElement::identity(2);
        for &p in k.base.lamps().keys() {
            rebuilt = mul(&rebuilt, &eval(&t_n_word(-p)));
        }
        rebuilt = mul(&rebuilt, &pow_ext(&ab, k.base.shift(), twist));
        if k.flip || back != g || !other.flip || rebuilt != k {
            bad_factor = Some(g);
            break;
        }
    }
    checks.push(Check {
        name: "unique factorization K * <a>",
        pass: bad_factor.is_none(),
        detail: bad_factor.map_or("200 sampled elements factor uniquely".into(), |g| format!("fails for {g}")),
    });

    StructureReport { window, checks }
}

fn pow_ext(g: &ExtLampElement, exp: i64, twist: Twist) -> ExtLampElement {
    let base = if exp < 0 { ext_inverse_with(g, twist) } else { g.clone() };
    (0..exp.unsigned_abs())
        .fold(ExtLampElement::identity(2), |acc, _| ext_multiply_with(&acc, &base, twist).expect("modulus 2"))
}

/// Metabelian identities on random samples: commutators in `L` have shift 0,
/// and shift-0 elements commute. Returns the number of violations.
pub fn metabelian_violations(samples: usize, modulus: u32, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..samples {
        let u: Vec<LampElement> = (0..4).map(|_| random_lamp(&mut rng, modulus, 6)).collect();
        let c1 = u[0].commutator(&u[1]);
        let c2 = u[2].commutator(&u[3]);
        if c1.shift() != 0 || c2.shift() != 0 || !c1.commutator(&c2).is_identity() {
            bad += 1;
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> FreeWord {
        FreeWord::parse(s, &st_alphabet()).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let (s, t) = (LampElement::s(2), LampElement::t(2));
        assert!(s.mul(&s).is_identity());
        assert!(t.mul(&t.inverse()).is_identity());
        let st1 = s.conj(&t);
        assert_eq!(s.mul(&st1), st1.mul(&s));
        assert_eq!(st1, LampElement::lamp(2, -1, 1));
        assert_eq!(
            lamp_multiply(&LampElement::s(2), &LampElement::s(3)),
            Err(Error::ModulusMismatch(2, 3))
        );
    }

    #[test]
    fn alpha_is_conjugation_by_a() {
        let (s, t) = (LampElement::s(2), LampElement::t(2));
        assert_eq!(alpha(&t), t.inverse());
        assert_eq!(alpha(&s), t.mul(&s).mul(&t.inverse()));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let u = random_lamp(&mut rng, 3, 5);
            let v = random_lamp(&mut rng, 3, 5);
            assert_eq!(alpha(&alpha(&u)), u);
            assert_eq!(alpha(&u.mul(&v)), alpha(&u).mul(&alpha(&v)));
        }
    }

    #[test]
    fn st_words() {
        assert!(eval_st_word(&st("ss"), 2).unwrap().is_identity());
        assert!(eval_st_word(&commutator_relator(3), 2).unwrap().is_identity());
        assert_eq!(eval_st_word(&st("st"), 2).unwrap(), LampElement::new(2, [(0, 1)], 1).unwrap());
        assert_eq!(commutator_relator(1).len(), 8);
        assert_eq!(commutator_relator(1), st("STStsTst"));
        assert_eq!(commutator_relator(2).display(&st_alphabet()).to_string(), "STTSttsTTstt");
    }

    #[test]
    fn presentation_relators_vanish() {
        for n in 2..=5 {
            assert!(eval_st_word(&power_relator(n), n).unwrap().is_identity());
            for i in 1..=50 {
                assert!(eval_st_word(&commutator_relator(i), n).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn ext_examples() {
        let a = ExtLampElement::flip(2);
        let t = ExtLampElement::from_base(LampElement::t(2));
        let s = ExtLampElement::from_base(LampElement::s(2));
        assert!(a.mul(&a).is_identity());
        assert_eq!(a.mul(&t).mul(&a), ExtLampElement::from_base(LampElement::t(2).inverse()));
        let expected = LampElement::t(2).mul(&LampElement::s(2)).mul(&LampElement::t(2).inverse());
        assert_eq!(a.mul(&s).mul(&a), ExtLampElement::from_base(expected));
        assert_eq!(a.to_string(), "lamps:{} shift:0 flip:1");
        assert_eq!(s.to_string(), "lamps:{0:1} shift:0 flip:0");
    }

    #[test]
    fn dictionary() {
        assert!(dictionary_holds(ALPHA));
        let g = |s: &str| GenWord::parse(s).unwrap();
        assert!(eval_abcd_word(&g("aa"), Gen::D).is_identity());
        assert!(eval_abcd_word(&g("bcd"), Gen::D).is_identity());
        assert_eq!(eval_abcd_word(&g("ab"), Gen::D), ExtLampElement::from_base(LampElement::t(2)));
        // the literal reading s ↦ t⁻¹ s t breaks c² = e
        fn wrong(u: &LampElement) -> LampElement {
            LampElement::new(2, u.lamps().iter().map(|(&p, &v)| (-1 - p, v)), -u.shift()).unwrap()
        }
        assert!(!dictionary_holds(wrong));
    }

    #[test]
    fn t_n_values() {
        assert_eq!(lamp_t_n(0), ExtLampElement::from_base(LampElement::s(2)));
        let ab = eval_abcd_word(&GenWord::parse("ab").unwrap(), Gen::D);
        assert_eq!(lamp_t_n(1), ab.inverse().mul(&lamp_t_n(0)).mul(&ab));
        let ada = eval_abcd_word(&GenWord::parse("ada").unwrap(), Gen::D);
        assert_eq!(lamp_t_n(-1), ada);
        for n in -10..=10 {
            assert_eq!(lamp_t_n(n), ExtLampElement::from_base(LampElement::lamp(2, -n, 1)));
        }
    }

    #[test]
    fn structure() {
        for r in [1, 20] {
            let rep = structure_report(r);
            assert!(rep.all_pass(), "{rep:?}");
            assert_eq!(rep.checks.len(), 5);
        }
        fn identity(u: &LampElement) -> LampElement {
            u.clone()
        }
        let bad = structure_report_with(3, identity);
        assert!(!bad.checks[2].pass);
        assert!(!bad.all_pass());
    }

    #[test]
    fn metabelian() {
        assert_eq!(metabelian_violations(1000, 2, 7), 0);
        assert_eq!(metabelian_violations(200, 5, 8), 0);
    }
}
