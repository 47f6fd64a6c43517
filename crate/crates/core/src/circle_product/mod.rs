//! The circle product `W(ℤ_n, ℤ, S)`: a graph product of copies of `ℤ_n`
//! over the graph `T_S` on `ℤ`, extended by `ℤ` acting through translation.
//! Used to certify that no commutator relator of the lamplighter
//! presentation follows from the others.

mod graph_product;
mod sequence;

use serde::Serialize;

pub use graph_product::{
    commutator_trivial, gp_reduce, racg_matrix_oracle, ts_adjacent, w_commutator, w_inverse, w_multiply, w_pow,
    GPWord, WElement,
};
pub use sequence::{
    build_s_sequence, difference_witness, in_difference_set, verify_difference_window, Clause, DifferenceReport,
    SSpec, Variant, Witness,
};

use crate::error::{Error, Result};
use crate::lamplighter::{commutator_relator, power_relator};
use crate::words::FreeWord;

/// Evaluates a word over `(s, t)` in the circle product under `s ↦ x`,
/// `t ↦ y`.
pub fn eval_st_in_w(w: &FreeWord, spec: &SSpec, modulus: u32) -> Result<WElement> {
    if w.rank() != 2 {
        return Err(Error::RankMismatch(w.rank(), 2));
    }
    let gens = [WElement::x(modulus), WElement::y(modulus)];
    let invs = [w_inverse(&gens[0], spec)?, w_inverse(&gens[1], spec)?];
    w.letters().iter().try_fold(WElement::identity(modulus), |acc, l| {
        let g = if l.inverse { &invs[l.gen as usize] } else { &gens[l.gen as usize] };
        w_multiply(&acc, g, spec)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorRow {
    pub i: i64,
    pub trivial: bool,
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorRow {
    pub i: i64,
    /// Whether the relator `[s, s^{tⁱ}]` maps to the identity.
    pub trivial: bool,
    pub expected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub n: u32,
    pub m: u32,
    pub variant: Variant,
    pub window: i64,
    pub difference_check: DifferenceReport,
    pub commutators: Vec<CommutatorRow>,
    /// Images of `[s, s^{tⁱ}]`, `1 ≤ i ≤ window`, under `s ↦ x`, `t ↦ y`.
    pub relators: Vec<RelatorRow>,
    /// `sⁿ ↦ xⁿ` is trivial.
    pub power_trivial: bool,
    pub verdict: &'static str,
}

impl MinimalityReport {
    pub fn pass(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Checks that `W(ℤ_n, ℤ, S)` satisfies every relator of
/// `⟨s, t | sⁿ, [s, s^{tⁱ}] (i ≥ 1)⟩` up to index `window` except `[s, s^{tᵐ}]`.
pub fn verify_minimality(n: u32, spec: &SSpec, window: i64) -> Result<MinimalityReport> {
    if n < 2 {
        return Err(Error::BadModulus(n));
    }
    let m = spec.m() as i64;
    if window <= m {
        return Err(Error::InvalidArgument(format!("window {window} must exceed m = {m}")));
    }
    let difference_check = verify_difference_window(spec, window);
    let commutators = (-window..=window)
        .filter(|&i| i != 0)
        .map(|i| Ok(CommutatorRow { i, trivial: commutator_trivial(i, spec, n)?, expected: i.abs() != m }))
        .collect::<Result<Vec<_>>>()?;
    let relators = (1..=window)
        .map(|i| {
            let image = eval_st_in_w(&commutator_relator(i), spec, n)?;
            Ok(RelatorRow { i, trivial: image.is_identity(), expected: i != m })
        })
        .collect::<Result<Vec<_>>>()?;
    let power_trivial = eval_st_in_w(&power_relator(n), spec, n)?.is_identity();
    let ok = difference_check.pass
        && power_trivial
        && commutators.iter().all(|c| c.trivial == c.expected)
        && relators.iter().all(|r| r.trivial == r.expected);
    Ok(MinimalityReport {
        n,
        m: spec.m(),
        variant: spec.variant(),
        window,
        difference_check,
        commutators,
        relators,
        power_trivial,
        verdict: if ok { "pass" } else { "fail" },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimality_examples() {
        assert!(verify_minimality(2, &SSpec::corrected(1).unwrap(), 10).unwrap().pass());
        assert!(verify_minimality(3, &SSpec::corrected(3).unwrap(), 12).unwrap().pass());
        let paper = verify_minimality(2, &SSpec::new(2, Variant::Paper).unwrap(), 12).unwrap();
        assert!(!paper.pass());
        assert!(!paper.difference_check.pass);
        assert!(verify_minimality(2, &SSpec::corrected(2).unwrap(), 12).unwrap().pass());
        assert!(verify_minimality(2, &SSpec::corrected(2).unwrap(), 2).is_err());
    }

    #[test]
    fn relator_images() {
        let s = SSpec::corrected(2).unwrap();
        let r2 = eval_st_in_w(&commutator_relator(2), &s, 2).unwrap();
        assert!(!r2.is_identity());
        assert!(eval_st_in_w(&commutator_relator(3), &s, 2).unwrap().is_identity());
        assert!(eval_st_in_w(&power_relator(3), &s, 3).unwrap().is_identity());
    }
}
