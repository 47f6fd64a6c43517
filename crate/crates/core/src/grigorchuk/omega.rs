use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An eventually periodic sequence over `{0, 1, 2}`, written
/// `"<preperiod>(<period>)"`. Stored in canonical form (shortest period,
/// shortest preperiod), so structural equality is sequence equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaWord {
    pre: Vec<u8>,
    period: Vec<u8>,
}

impl OmegaWord {
    pub fn new(pre: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        let text = || format!("{:?}({:?})", pre, period);
        if period.is_empty() {
            return Err(Error::ParseOmega { input: text(), reason: "empty period" });
        }
        if pre.iter().chain(&period).any(|&s| s > 2) {
            return Err(Error::ParseOmega { input: text(), reason: "symbols must be 0, 1 or 2" });
        }
        let mut w = OmegaWord { pre, period };
        w.canonicalize();
        Ok(w)
    }

    /// The constant sequence `sss…`.
    pub fn constant(symbol: u8) -> Self {
        OmegaWord::new(Vec::new(), vec![symbol]).expect("valid symbol")
    }

    /// `0^k (012)^∞`, the approximants of `000…` used throughout.
    pub fn zeros_then_012(k: usize) -> Self {
        OmegaWord::new(vec![0; k], vec![0, 1, 2]).expect("valid symbols")
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(p) = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.period[i] == self.period[i - p])) {
            self.period.truncate(p);
        }
        while let Some(&last) = self.pre.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Length of one preperiod plus one period: every symbol value that occurs
    /// from position `p` on occurs within `p .. p + cycle_len()`.
    pub fn cycle_len(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    /// `ω_{i+1}` in one-based notation, i.e. the symbol at zero-based index `i`.
    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// The shift `τ`: drop the first symbol.
    pub fn shift(&self) -> Self {
        let mut w = if self.pre.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            OmegaWord { pre: Vec::new(), period }
        } else {
            OmegaWord { pre: self.pre[1..].to_vec(), period: self.period.clone() }
        };
        w.canonicalize();
        w
    }

    pub fn shifted(&self, by: usize) -> Self {
        let mut w = self.clone();
        for _ in 0..by {
            w = w.shift();
        }
        w
    }

    pub fn is_eventually_constant(&self) -> bool {
        self.period.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.period.len() == 1 && self.pre.is_empty()
    }

    pub fn constant_symbol(&self) -> Option<u8> {
        self.is_constant().then(|| self.period[0])
    }

    /// True when all three symbols occur in the period.
    pub fn all_symbols_recur(&self) -> bool {
        (0..3).all(|s| self.period.contains(&s))
    }
}

impl FromStr for OmegaWord {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason| Error::ParseOmega { input: input.to_string(), reason };
        let s = input.trim();
        let open = s.find('(').ok_or_else(|| err("missing '('"))?;
        let close = s.rfind(')').ok_or_else(|| err("missing ')'"))?;
        if close != s.len() - 1 || close < open {
            return Err(err("period must be the trailing parenthesised group"));
        }
        let digits = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .map(|c| match c {
                    '0' | '1' | '2' => Ok(c as u8 - b'0'),
                    _ => Err(err("symbols must be 0, 1 or 2")),
                })
                .collect()
        };
        let pre = digits(&s[..open])?;
        let period = digits(&s[open + 1..close])?;
        if period.is_empty() {
            return Err(err("empty period"));
        }
        OmegaWord::new(pre, period)
    }
}

impl fmt::Display for OmegaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.pre {
            write!(f, "{s}")?;
        }
        f.write_str("(")?;
        for s in &self.period {
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn om(s: &str) -> OmegaWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(om("000(012)").to_string(), "000(012)");
        assert_eq!(om("(0)").to_string(), "(0)");
        assert_eq!(om("(012012)").to_string(), "(012)");
        assert_eq!(om("2(012)").to_string(), "(201)");
        assert_eq!(om("0(0)"), om("(0)"));
        assert!("012".parse::<OmegaWord>().is_err());
        assert!("(013)".parse::<OmegaWord>().is_err());
        assert!("()".parse::<OmegaWord>().is_err());
        assert!("(0)1".parse::<OmegaWord>().is_err());
    }

    #[test]
    fn symbols_and_shift() {
        let w = om("01(12)");
        let seq: Vec<u8> = (0..7).map(|i| w.symbol(i)).collect();
        assert_eq!(seq, [0, 1, 1, 2, 1, 2, 1]);
        let t = w.shift();
        assert_eq!((0..6).map(|i| t.symbol(i)).collect::<Vec<_>>(), [1, 1, 2, 1, 2, 1]);
        assert_eq!(om("(012)").shift(), om("(120)"));
        assert_eq!(om("(012)").shifted(3), om("(012)"));
    }

    #[test]
    fn constancy() {
        assert!(om("(0)").is_constant());
        assert!(om("12(0)").is_eventually_constant());
        assert!(!om("12(0)").is_constant());
        assert!(!om("(01)").is_eventually_constant());
        assert_eq!(om("(2)").constant_symbol(), Some(2));
        assert!(om("(012)").all_symbols_recur());
        assert!(!om("(01)").all_symbols_recur());
    }
}
