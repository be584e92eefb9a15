//! Braid words on `n` strands.
//!
//! A word is stored exactly as written: a strand count and a list of signed
//! generator indices, `i` for `σ_i` and `-i` for `σ_i⁻¹`. Words are never
//! normalised beyond the optional free cancellation of [`BraidWord::free_reduce`].

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Sign of a crossing or of a stabilisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_i32(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// Where the new generator `σ_n^ε` goes when stabilising.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Placement {
    /// `σ_n^ε · ι(β)`.
    #[default]
    Before,
    /// `ι(β) · σ_n^ε`. Under the right-to-left action this word has automorphism
    /// `ι(h_β) ∘ h_{σ_n^ε}`.
    After,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidParameter("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            check_letter(l, strands)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands > 0, "a braid needs at least one strand");
        BraidWord { strands, letters: Vec::new() }
    }

    /// `σ_index^sign` on `strands` strands.
    pub fn generator(strands: usize, index: usize, sign: Sign) -> Result<Self> {
        BraidWord::new(strands, alloc::vec![sign.value() * index as i32])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch(self.strands, other.strands));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Cancels adjacent `σ_i^{±1} σ_i^{∓1}` pairs.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: out }
    }

    /// The strand-adding inclusion `ι: B_n → B_{n+1}`.
    pub fn include(&self) -> BraidWord {
        BraidWord { strands: self.strands + 1, letters: self.letters.clone() }
    }

    /// `α⁻¹ β α`, the first Markov move.
    pub fn conjugate(&self, alpha: &BraidWord) -> Result<BraidWord> {
        alpha.inverse().compose(self)?.compose(alpha)
    }

    /// The second Markov move: adds a strand and the crossing `σ_n^sign`.
    pub fn stabilize(&self, sign: Sign, placement: Placement) -> BraidWord {
        let n = self.strands as i32;
        let new = sign.value() * n;
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        match placement {
            Placement::Before => {
                letters.push(new);
                letters.extend_from_slice(&self.letters);
            }
            Placement::After => {
                letters.extend_from_slice(&self.letters);
                letters.push(new);
            }
        }
        BraidWord { strands: self.strands + 1, letters }
    }

    /// Image in the symmetric group, with `σ_i ↦ (i, i+1)` and products
    /// composed as functions (rightmost letter applied first). This is the
    /// permutation `π` with `h_β(x_j)` conjugate to `x_{π(j)}`.
    pub fn permutation(&self) -> Permutation {
        let mut images: Vec<usize> = (0..self.strands).collect();
        for &l in self.letters.iter().rev() {
            let i = l.unsigned_abs() as usize - 1;
            for v in images.iter_mut() {
                if *v == i {
                    *v = i + 1;
                } else if *v == i + 1 {
                    *v = i;
                }
            }
        }
        Permutation { images }
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        self.permutation().cycles().len()
    }
}

fn check_letter(l: i32, strands: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::ZeroLetter);
    }
    let index = l.unsigned_abs() as usize;
    if index >= strands {
        return Err(Error::LetterOutOfRange { index, strands });
    }
    Ok(())
}

/// Parses whitespace-separated signed generator indices.
///
/// Without an explicit strand count the braid lives on `max|letter| + 1`
/// strands.
pub fn parse_braid(text: &str, strands: Option<usize>) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let l: i32 = tok.parse().map_err(|_| Error::InvalidToken(tok.to_string()))?;
        if l == 0 {
            return Err(Error::ZeroLetter);
        }
        letters.push(l);
    }
    let strands = match strands {
        Some(n) => n,
        None => {
            let max = letters.iter().map(|l| l.unsigned_abs() as usize).max().ok_or(Error::EmptyBraid)?;
            max + 1
        }
    };
    BraidWord::new(strands, letters)
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid(s, None)
    }
}

/// A permutation of `{1, …, n}`, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from one-based images.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return None;
            }
            seen[v - 1] = true;
            zero_based.push(v - 1);
        }
        Some(Permutation { images: zero_based })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// One-based image of the one-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = alloc::vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Disjoint cycles (one-based), fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = alloc::vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}
