use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grigorchuk::{self, route_constant, OmegaWord, Portrait};
use crate::lamplighter::{eval_abcd_word, eval_st_word, st_alphabet, ExtLampElement, LampElement};
use crate::words::{Alphabet, FreeWord, GenWord};

/// Canonical or near-canonical key of a group element, used to bucket
/// candidates during ball construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fingerprint {
    Unit,
    Word(FreeWord),
    Lamp(LampElement),
    Ext(ExtLampElement),
    Portrait(Portrait),
}

pub type Oracle = Arc<dyn Fn(&FreeWord) -> Result<bool> + Send + Sync>;

/// Fingerprint of a word; the second argument bounds the length of the
/// quotients that will be compared.
pub type KeyFn = Arc<dyn Fn(&FreeWord, usize) -> Result<Fingerprint> + Send + Sync>;

#[derive(Clone)]
pub(crate) struct Keying {
    pub(crate) key: KeyFn,
    /// Equal keys imply equal elements.
    pub(crate) exact: bool,
}

/// A marked group `(G, S)`: a generator count and a triviality oracle on
/// words, plus optional hints (involutive generators, fingerprints).
#[derive(Clone)]
pub struct MarkedGroupHandle {
    label: String,
    rank: usize,
    alphabet: Alphabet,
    oracle: Oracle,
    involutive: Vec<bool>,
    pub(crate) keying: Option<Keying>,
    omega: Option<OmegaWord>,
}

impl fmt::Debug for MarkedGroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MarkedGroupHandle")
            .field("label", &self.label)
            .field("rank", &self.rank)
            .field("involutive", &self.involutive)
            .finish_non_exhaustive()
    }
}

impl MarkedGroupHandle {
    pub fn new(
        label: impl Into<String>,
        alphabet: Alphabet,
        oracle: impl Fn(&FreeWord) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        let rank = alphabet.rank();
        MarkedGroupHandle {
            label: label.into(),
            rank,
            alphabet,
            oracle: Arc::new(oracle),
            involutive: vec![false; rank],
            keying: None,
            omega: None,
        }
    }

    /// Declares which generators are involutions. The ball search then skips
    /// inverse letters of those generators.
    pub fn with_involutive(mut self, flags: Vec<bool>) -> Self {
        assert_eq!(flags.len(), self.rank);
        self.involutive = flags;
        self
    }

    /// Attaches a fingerprint. With `exact`, equal fingerprints are taken as
    /// equal elements without consulting the oracle.
    pub fn with_fingerprint(
        mut self,
        key: impl Fn(&FreeWord, usize) -> Result<Fingerprint> + Send + Sync + 'static,
        exact: bool,
    ) -> Self {
        self.keying = Some(Keying { key: Arc::new(key), exact });
        self
    }

    fn with_omega(mut self, omega: OmegaWord) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn involutive(&self) -> &[bool] {
        &self.involutive
    }

    pub fn omega(&self) -> Option<&OmegaWord> {
        self.omega.as_ref()
    }

    pub fn is_trivial(&self, w: &FreeWord) -> Result<bool> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch(w.rank(), self.rank));
        }
        (self.oracle)(w)
    }

    /// The fingerprint of `w` sized for quotients up to `max_len`, and whether
    /// equal fingerprints mean equal elements.
    pub fn fingerprint(&self, w: &FreeWord, max_len: usize) -> Result<Option<(Fingerprint, bool)>> {
        match &self.keying {
            Some(k) => Ok(Some(((k.key)(w, max_len)?, k.exact))),
            None => Ok(None),
        }
    }

    pub fn parse_word(&self, s: &str) -> Result<FreeWord> {
        FreeWord::parse(s, &self.alphabet)
    }

    /// The trivial group with `rank` generators.
    pub fn trivial_group(rank: usize) -> Self {
        MarkedGroupHandle::new(format!("1^{rank}"), Alphabet::standard(rank), |_| Ok(true))
            .with_involutive(vec![true; rank])
            .with_fingerprint(|_, _| Ok(Fingerprint::Unit), true)
    }

    /// The free group of rank `rank`.
    pub fn free(rank: usize) -> Self {
        MarkedGroupHandle::new(format!("F{rank}"), Alphabet::standard(rank), |w| Ok(w.reduced().is_empty()))
            .with_fingerprint(|w, _| Ok(Fingerprint::Word(w.reduced())), true)
    }

    /// `ℤ_n ≀ ℤ` marked by `(s, t)`.
    pub fn lamplighter(modulus: u32) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus));
        }
        Ok(MarkedGroupHandle::new(format!("Z{modulus} wr Z"), st_alphabet(), move |w| {
            Ok(eval_st_word(w, modulus)?.is_identity())
        })
        .with_involutive(vec![modulus == 2, false])
        .with_fingerprint(move |w, _| Ok(Fingerprint::Lamp(eval_st_word(w, modulus)?)), true))
    }

    /// `G_ω` marked by `(a, b_ω, c_ω, d_ω)`. Constant `ω` uses the `L ⋊ ℤ₂`
    /// model; other eventually constant `ω` are rejected.
    pub fn grigorchuk(omega: &OmegaWord) -> Result<Self> {
        let label = format!("G_{omega}");
        let alphabet = Alphabet::new("abcd");
        if let Some(symbol) = omega.constant_symbol() {
            let dead = route_constant(symbol).dead;
            let eval = move |w: &FreeWord| -> Result<ExtLampElement> { Ok(eval_abcd_word(&GenWord::from_free(w)?, dead)) };
            return Ok(MarkedGroupHandle::new(label, alphabet, move |w| Ok(eval(w)?.is_identity()))
                .with_involutive(vec![true; 4])
                .with_fingerprint(move |w, _| Ok(Fingerprint::Ext(eval(w)?)), true)
                .with_omega(omega.clone()));
        }
        if omega.is_eventually_constant() {
            return Err(Error::UnsupportedOmega(omega.to_string()));
        }
        let (o1, o2) = (omega.clone(), omega.clone());
        Ok(MarkedGroupHandle::new(label, alphabet, move |w| grigorchuk::is_trivial(&GenWord::from_free(w)?, &o1))
            .with_involutive(vec![true; 4])
            .with_fingerprint(
                move |w, max_len| {
                    let depth = grigorchuk::separation_depth(&o2, max_len);
                    Ok(Fingerprint::Portrait(grigorchuk::portrait_of(&GenWord::from_free(w)?, &o2, depth)))
                },
                false,
            )
            .with_omega(omega.clone()))
    }

    /// `L_ω = ⟨d_ω, a b_ω⟩ ≤ G_ω` marked by `(x, y) = (d_ω, a b_ω)`.
    pub fn grigorchuk_l(omega: &OmegaWord) -> Result<Self> {
        let label = format!("L_{omega}");
        let alphabet = Alphabet::new("xy");
        if let Some(symbol) = omega.constant_symbol() {
            let dead = route_constant(symbol).dead;
            let eval = move |w: &FreeWord| -> Result<ExtLampElement> {
                let g = grigorchuk::translate_l_word(w)?;
                Ok(eval_abcd_word(&g, dead))
            };
            return Ok(MarkedGroupHandle::new(label, alphabet, move |w| Ok(eval(w)?.is_identity()))
                .with_involutive(vec![true, false])
                .with_fingerprint(move |w, _| Ok(Fingerprint::Ext(eval(w)?)), true)
                .with_omega(omega.clone()));
        }
        if omega.is_eventually_constant() {
            return Err(Error::UnsupportedOmega(omega.to_string()));
        }
        let (o1, o2) = (omega.clone(), omega.clone());
        Ok(MarkedGroupHandle::new(label, alphabet, move |w| {
            grigorchuk::is_trivial(&grigorchuk::translate_l_word(w)?, &o1)
        })
        .with_involutive(vec![true, false])
        .with_fingerprint(
            move |w, max_len| {
                let g = grigorchuk::translate_l_word(w)?;
                // each x or y costs at most two letters of G_ω
                let depth = grigorchuk::separation_depth(&o2, 2 * max_len);
                Ok(Fingerprint::Portrait(grigorchuk::portrait_of(&g, &o2, depth)))
            },
            false,
        )
        .with_omega(omega.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handle_oracles() {
        let lamp = MarkedGroupHandle::lamplighter(2).unwrap();
        assert!(lamp.is_trivial(&lamp.parse_word("ss").unwrap()).unwrap());
        assert!(!lamp.is_trivial(&lamp.parse_word("st").unwrap()).unwrap());
        let free = MarkedGroupHandle::free(2);
        assert!(free.is_trivial(&free.parse_word("abBA").unwrap()).unwrap());
        assert!(!free.is_trivial(&free.parse_word("aa").unwrap()).unwrap());
        let g = MarkedGroupHandle::grigorchuk(&"(012)".parse().unwrap()).unwrap();
        assert!(g.is_trivial(&g.parse_word("bcd").unwrap()).unwrap());
        assert!(g.is_trivial(&g.parse_word("aBbA").unwrap()).unwrap());
        assert!(matches!(
            g.is_trivial(&FreeWord::empty(2)),
            Err(Error::RankMismatch(2, 4))
        ));
    }

    #[test]
    fn constant_routes() {
        for s in 0..3u8 {
            let g = MarkedGroupHandle::grigorchuk(&OmegaWord::constant(s)).unwrap();
            for r in ["aa", "bb", "cc", "dd", "bcd"] {
                assert!(g.is_trivial(&g.parse_word(r).unwrap()).unwrap());
            }
            let dead = ['d', 'c', 'b'][s as usize].to_string();
            assert!(!g.is_trivial(&g.parse_word(&dead).unwrap()).unwrap());
            let l = MarkedGroupHandle::grigorchuk_l(&OmegaWord::constant(s)).unwrap();
            assert!(l.is_trivial(&l.parse_word("xx").unwrap()).unwrap());
            assert!(!l.is_trivial(&l.parse_word("y").unwrap()).unwrap());
        }
        let l = MarkedGroupHandle::grigorchuk_l(&OmegaWord::constant(0)).unwrap();
        for i in 1..4 {
            assert!(l.is_trivial(&crate::lamplighter::commutator_relator(i)).unwrap());
        }
        assert!(matches!(
            MarkedGroupHandle::grigorchuk(&"1(0)".parse().unwrap()),
            Err(Error::UnsupportedOmega(_))
        ));
    }
}
