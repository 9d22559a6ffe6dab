//! Binary input sequences, written as a finite prefix plus an optional
//! periodic tail: `0101`, `(10)*`, `1(100)*`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An input sequence `s_0, s_1, ...`. A `1` selects a transitive step and a
/// `0` an anti-transitive step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Sequence {
    prefix: Vec<u8>,
    tail: Option<Vec<u8>>,
}

impl Sequence {
    pub fn new(prefix: Vec<u8>, tail: Option<Vec<u8>>) -> Result<Sequence> {
        if prefix.iter().chain(tail.iter().flatten()).any(|&b| b > 1) {
            return Err(Error::parse("sequence bits must be 0 or 1"));
        }
        if matches!(&tail, Some(t) if t.is_empty()) {
            return Err(Error::parse("periodic tail must not be empty"));
        }
        if prefix.is_empty() && tail.is_none() {
            return Err(Error::parse("sequence must not be empty"));
        }
        Ok(Sequence { prefix, tail })
    }

    pub fn ones() -> Sequence {
        Sequence::new(vec![], Some(vec![1])).unwrap()
    }

    pub fn zeros() -> Sequence {
        Sequence::new(vec![], Some(vec![0])).unwrap()
    }

    /// Parses `BITS | BITS? "(" BITS ")*"`.
    pub fn parse(text: &str) -> Result<Sequence> {
        let text = text.trim();
        let bits = |s: &str| -> Result<Vec<u8>> {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::parse(format!(
                        "invalid character {other:?} in sequence {text:?}"
                    ))),
                })
                .collect()
        };
        match text.find('(') {
            None => {
                if text.contains(')') || text.contains('*') {
                    return Err(Error::parse(format!("unbalanced sequence {text:?}")));
                }
                Sequence::new(bits(text)?, None)
            }
            Some(open) => {
                let body = text[open + 1..]
                    .strip_suffix(")*")
                    .ok_or_else(|| Error::parse(format!("expected ')*' to close {text:?}")))?;
                if body.is_empty() {
                    return Err(Error::parse(format!("empty periodic group in {text:?}")));
                }
                Sequence::new(bits(&text[..open])?, Some(bits(body)?))
            }
        }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> Option<&[u8]> {
        self.tail.as_deref()
    }

    /// Number of defined bits, or `None` when the sequence is infinite.
    pub fn finite_len(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.prefix.len()),
        }
    }

    /// `s_i`, or `None` past the end of a finite sequence.
    pub fn bit(&self, i: usize) -> Option<u8> {
        if let Some(&b) = self.prefix.get(i) {
            return Some(b);
        }
        let tail = self.tail.as_ref()?;
        Some(tail[(i - self.prefix.len()) % tail.len()])
    }

    /// Index of the `k`-th zero (1-based): `zero_index(1)` is τ₁.
    pub fn zero_index(&self, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        let mut seen = 0;
        let mut i = 0;
        // Past prefix + k full periods every zero of the tail has recurred k times.
        let horizon = self.prefix.len() + k * self.tail.as_ref().map_or(0, Vec::len);
        while i < horizon.max(self.prefix.len()) {
            if self.bit(i)? == 0 {
                seen += 1;
                if seen == k {
                    return Some(i);
                }
            }
            i += 1;
        }
        None
    }

    pub fn tau1(&self) -> Option<usize> {
        self.zero_index(1)
    }

    pub fn tau2(&self) -> Option<usize> {
        self.zero_index(2)
    }

    pub fn tau3(&self) -> Option<usize> {
        self.zero_index(3)
    }

    /// β(t): the largest index `<= t` with `s_β = 0`.
    pub fn beta(&self, t: usize) -> Option<usize> {
        (0..=t).rev().find(|&i| self.bit(i) == Some(0))
    }

    /// Number of zeros among `s_0..s_{t-1}`.
    pub fn zeros_before(&self, t: usize) -> usize {
        (0..t).filter(|&i| self.bit(i) == Some(0)).count()
    }

    /// The smallest `k` such that no run of `k` consecutive 1's occurs, when
    /// the zeros have bounded gaps (the tail contains a 0).
    pub fn gap_bound(&self) -> Option<usize> {
        let tail = self.tail.as_ref()?;
        if !tail.contains(&0) {
            return None;
        }
        let span = self.prefix.len() + 3 * tail.len();
        let (mut best, mut run) = (0, 0);
        for i in 0..span {
            if self.bit(i) == Some(1) {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        Some(best + 1)
    }

    /// First zero at least two places after τ₁; together with τ₁ this gives
    /// two non-consecutive zeros.
    pub fn second_separated_zero(&self) -> Option<usize> {
        let t1 = self.tau1()?;
        let span = t1 + 2 + self.tail.as_ref().map_or(0, Vec::len) + self.prefix.len();
        (t1 + 2..span).find(|&i| self.bit(i) == Some(0))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.prefix {
            write!(f, "{b}")?;
        }
        if let Some(tail) = &self.tail {
            f.write_str("(")?;
            for b in tail {
                write!(f, "{b}")?;
            }
            f.write_str(")*")?;
        }
        Ok(())
    }
}

impl FromStr for Sequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sequence> {
        Sequence::parse(s)
    }
}

impl TryFrom<String> for Sequence {
    type Error = Error;

    fn try_from(s: String) -> Result<Sequence> {
        Sequence::parse(&s)
    }
}

impl From<Sequence> for String {
    fn from(s: Sequence) -> String {
        s.to_string()
    }
}
