use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which even-index multiplier the sequence uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `a_{2j} = j(m+1) + j(j+1)/2`. Its difference set contains `m`.
    Paper,
    /// `a_{2j} = j(m+2) + j(j+1)/2`, with difference set `ℤ ∖ {±m}`.
    Corrected,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Variant::Paper),
            "corrected" => Ok(Variant::Corrected),
            _ => Err(Error::InvalidArgument(format!("unknown variant {s:?}, expected paper or corrected"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Paper => "paper",
            Variant::Corrected => "corrected",
        })
    }
}

/// Parameters of the set `S = {a_0 < a_1 < …}` whose difference set should
/// miss exactly `±m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SSpec {
    m: u32,
    variant: Variant,
}

impl SSpec {
    pub fn new(m: u32, variant: Variant) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        Ok(SSpec { m, variant })
    }

    pub fn corrected(m: u32) -> Result<Self> {
        SSpec::new(m, Variant::Corrected)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `a_{2j}`.
    fn even_term(&self, j: i64) -> i64 {
        let mult = match self.variant {
            Variant::Paper => self.m as i64 + 1,
            Variant::Corrected => self.m as i64 + 2,
        };
        j * mult + j * (j + 1) / 2
    }

    /// `a_{2j+1} - a_{2j}`.
    fn odd_gap(&self, j: i64) -> i64 {
        if j < self.m as i64 - 1 {
            j + 1
        } else {
            j + 2
        }
    }

    pub fn term(&self, k: usize) -> i64 {
        let j = (k / 2) as i64;
        match k % 2 {
            0 => self.even_term(j),
            _ => self.even_term(j) + self.odd_gap(j),
        }
    }
}

/// `a_0, …, a_{count-1}`.
pub fn build_s_sequence(spec: &SSpec, count: usize) -> Vec<i64> {
    (0..count).map(|k| spec.term(k)).collect()
}

/// Number of terms that realize every difference of absolute value at most
/// `d`. Beyond it odd gaps exceed `d`, any pair two or more indices apart
/// spans such a gap, and even gaps repeat a value already seen.
fn scan_len(d: i64, spec: &SSpec) -> usize {
    2 * (d as usize + spec.m as usize) + 6
}

/// A pair `(k, l)` with `a_k - a_l = δ`, if any.
pub fn difference_witness(delta: i64, spec: &SSpec) -> Option<(usize, usize)> {
    let a = build_s_sequence(spec, scan_len(delta.abs(), spec));
    (0..a.len()).find_map(|k| (0..a.len()).find(|&l| a[k] - a[l] == delta).map(|l| (k, l)))
}

pub fn in_difference_set(delta: i64, spec: &SSpec) -> bool {
    difference_witness(delta, spec).is_some()
}

/// `(k, l, a_k, a_l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub l: usize,
    pub a_k: i64,
    pub a_l: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    /// Offending index pairs, or missing differences for the coverage clause.
    pub witnesses: Vec<Witness>,
    pub missing: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceReport {
    pub m: u32,
    pub variant: Variant,
    pub window: i64,
    pub clauses: Vec<Clause>,
    pub pass: bool,
}

fn witness(spec: &SSpec, k: usize, l: usize) -> Witness {
    Witness { k, l, a_k: spec.term(k), a_l: spec.term(l) }
}

/// Checks on the window `|δ| ≤ window`: `±m ∉ S - S`, every other `δ` lies in
/// `S - S`, the odd-gap identities, and `|a_k - a_l| > m` when `|k - l| ≥ 2`.
pub fn verify_difference_window(spec: &SSpec, window: i64) -> DifferenceReport {
    let m = spec.m as i64;
    let mut clauses = Vec::new();

    let excluded: Vec<Witness> =
        [m, -m].iter().filter_map(|&d| difference_witness(d, spec)).map(|(k, l)| witness(spec, k, l)).collect();
    clauses.push(Clause { name: "m_excluded", pass: excluded.is_empty(), witnesses: excluded, missing: Vec::new() });

    let missing: Vec<i64> =
        (-window..=window).filter(|d| d.abs() != m && !in_difference_set(*d, spec)).collect();
    clauses.push(Clause { name: "others_covered", pass: missing.is_empty(), witnesses: Vec::new(), missing });

    let n = scan_len(window, spec);
    let a = build_s_sequence(spec, n);
    let bad_gaps: Vec<Witness> = (0..n / 2)
        .filter(|&j| 2 * j + 1 < n)
        .filter(|&j| {
            let want = if (j as i64) < m - 1 { j as i64 + 1 } else { j as i64 + 2 };
            a[2 * j + 1] - a[2 * j] != want
        })
        .map(|j| witness(spec, 2 * j + 1, 2 * j))
        .collect();
    clauses.push(Clause { name: "odd_gaps", pass: bad_gaps.is_empty(), witnesses: bad_gaps, missing: Vec::new() });

    let close: Vec<Witness> = (0..n)
        .flat_map(|k| (k + 2..n).map(move |l| (l, k)))
        .filter(|&(k, l)| a[k] - a[l] <= m)
        .map(|(k, l)| witness(spec, k, l))
        .collect();
    clauses.push(Clause { name: "far_pairs_exceed_m", pass: close.is_empty(), witnesses: close, missing: Vec::new() });

    let pass = clauses.iter().all(|c| c.pass);
    DifferenceReport { m: spec.m, variant: spec.variant, window, clauses, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequences() {
        let paper = SSpec::new(2, Variant::Paper).unwrap();
        let fixed = SSpec::corrected(2).unwrap();
        assert_eq!(build_s_sequence(&paper, 6), [0, 1, 4, 7, 9, 13]);
        assert_eq!(build_s_sequence(&fixed, 6), [0, 1, 5, 8, 11, 15]);
        assert_eq!(build_s_sequence(&SSpec::corrected(5).unwrap(), 1), [0]);
        assert!(SSpec::corrected(0).is_err());
    }

    #[test]
    fn differences() {
        let paper = SSpec::new(2, Variant::Paper).unwrap();
        let fixed = SSpec::corrected(2).unwrap();
        assert!(in_difference_set(0, &fixed));
        assert_eq!(difference_witness(2, &paper), Some((4, 3)));
        assert!(!in_difference_set(2, &fixed));
        assert!(!in_difference_set(-2, &fixed));
        assert!(in_difference_set(3, &fixed));
    }

    #[test]
    fn windows() {
        assert!(verify_difference_window(&SSpec::corrected(2).unwrap(), 30).pass);
        assert!(verify_difference_window(&SSpec::corrected(1).unwrap(), 20).pass);
        let r = verify_difference_window(&SSpec::new(2, Variant::Paper).unwrap(), 30);
        assert!(!r.pass);
        let first = &r.clauses[0];
        assert!(!first.pass);
        assert_eq!((first.witnesses[0].a_k, first.witnesses[0].a_l), (9, 7));
        // m = 1 under the printed formula: a_2 - a_1 = 3 - 2 = 1
        let r1 = verify_difference_window(&SSpec::new(1, Variant::Paper).unwrap(), 20);
        assert_eq!((r1.clauses[0].witnesses[0].a_k, r1.clauses[0].witnesses[0].a_l), (3, 2));
    }
}
