//! Reduced words in the free group `F_n`, the Artin action and Fox calculus.
//!
//! The same [`FreeWord`] type serves both generating sets of `F_n`: the
//! puncture loops `x_1, …, x_n` and the partial products `g_i = x_1 ⋯ x_i`.
//! Which alphabet a word is written in is tracked by the caller through
//! [`Basis`].

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::groupring::{CoefficientGroup, GroupElem, GroupRingElement};
use crate::poly::TPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    G,
}

impl Basis {
    pub fn letter(self) -> char {
        match self {
            Basis::X => 'x',
            Basis::G => 'g',
        }
    }
}

/// A freely reduced word, stored as syllables `(generator, exponent)` with
/// one-based generators and nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: usize,
    syllables: Vec<(u32, i64)>,
}

impl FreeWord {
    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, syllables: Vec::new() }
    }

    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::power_of(rank, i, 1)
    }

    /// `gen_i^e`.
    pub fn power_of(rank: usize, i: usize, e: i64) -> Result<Self> {
        if i == 0 || i > rank {
            return Err(Error::GeneratorOutOfRange { index: i, rank });
        }
        let mut w = Self::identity(rank);
        w.push(i as u32, e);
        Ok(w)
    }

    /// From signed letters: `i` is the `i`-th generator, `-i` its inverse.
    pub fn from_letters(rank: usize, letters: &[i32]) -> Result<Self> {
        let mut w = Self::identity(rank);
        for &l in letters {
            let i = l.unsigned_abs() as usize;
            if i == 0 || i > rank {
                return Err(Error::GeneratorOutOfRange { index: i, rank });
            }
            w.push(i as u32, l.signum() as i64);
        }
        Ok(w)
    }

    /// From syllables, reducing as it goes.
    pub fn from_syllables(rank: usize, syllables: &[(u32, i64)]) -> Result<Self> {
        let mut w = Self::identity(rank);
        for &(i, e) in syllables {
            if i == 0 || i as usize > rank {
                return Err(Error::GeneratorOutOfRange { index: i as usize, rank });
            }
            w.push(i, e);
        }
        Ok(w)
    }

    fn push(&mut self, i: u32, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == i {
                last.1 += e;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((i, e));
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn syllables(&self) -> &[(u32, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters, i.e. the word length.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|s| s.1.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Signed letters, one per generator occurrence.
    pub fn letters(&self) -> Vec<i32> {
        let mut out = Vec::with_capacity(self.len());
        for &(i, e) in &self.syllables {
            let l = if e > 0 { i as i32 } else { -(i as i32) };
            for _ in 0..e.unsigned_abs() {
                out.push(l);
            }
        }
        out
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        debug_assert_eq!(self.rank, other.rank, "rank mismatch in free group product");
        let mut out = self.clone();
        for &(i, e) in &other.syllables {
            out.push(i, e);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { rank: self.rank, syllables: self.syllables.iter().rev().map(|&(i, e)| (i, -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Total exponent of generator `i`.
    pub fn exponent_of(&self, i: usize) -> i64 {
        self.syllables.iter().filter(|s| s.0 as usize == i).map(|s| s.1).sum()
    }

    pub fn exponent_sum(&self) -> i64 {
        self.syllables.iter().map(|s| s.1).sum()
    }

    /// Abelianisation: the exponent vector.
    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for &(i, e) in &self.syllables {
            v[i as usize - 1] += e;
        }
        v
    }

    /// Image under the homomorphism sending generator `i` to `images[i - 1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        debug_assert_eq!(images.len(), self.rank);
        let target = images.first().map_or(0, |w| w.rank);
        let mut out = FreeWord::identity(target);
        for &(i, e) in &self.syllables {
            let img = &images[i as usize - 1];
            let piece = if e > 0 { img.clone() } else { img.inverse() };
            for _ in 0..e.unsigned_abs() {
                out = out.mul(&piece);
            }
        }
        out
    }

    /// Same word viewed in `F_m` with `m ≥ rank` (the inclusion `ι`).
    pub fn widen(&self, rank: usize) -> FreeWord {
        assert!(rank >= self.rank);
        FreeWord { rank, syllables: self.syllables.clone() }
    }

    /// Rewrites between the `x` and `g` alphabets.
    pub fn change_of_basis(&self, from: Basis, to: Basis) -> FreeWord {
        if from == to {
            return self.clone();
        }
        let n = self.rank;
        let images: Vec<FreeWord> = (1..=n)
            .map(|i| match (from, to) {
                // g_i = x_1 ⋯ x_i
                (Basis::G, Basis::X) => {
                    FreeWord::from_letters(n, &(1..=i as i32).collect::<Vec<_>>()).unwrap()
                }
                // x_i = g_{i-1}⁻¹ g_i
                _ => {
                    let mut w = FreeWord::identity(n);
                    if i > 1 {
                        w.push(i as u32 - 1, -1);
                    }
                    w.push(i as u32, 1);
                    w
                }
            })
            .collect();
        self.substitute(&images)
    }

    /// Rendering such as `x1 x2^-1 x1^3`; the identity renders as `e`.
    pub fn render(&self, basis: Basis) -> String {
        self.render_with(basis.letter())
    }

    pub fn render_with(&self, letter: char) -> String {
        if self.syllables.is_empty() {
            return "e".to_string();
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|&(i, e)| if e == 1 { alloc::format!("{letter}{i}") } else { alloc::format!("{letter}{i}^{e}") })
            .collect();
        parts.join(" ")
    }

    /// Parses the output of [`FreeWord::render`]. Either alphabet letter is accepted.
    pub fn parse(text: &str, rank: usize) -> Result<FreeWord> {
        let mut w = FreeWord::identity(rank);
        for tok in text.split_whitespace() {
            if tok == "e" {
                continue;
            }
            let bad = || Error::InvalidToken(tok.to_string());
            let body = tok.strip_prefix(['x', 'g']).ok_or_else(bad)?;
            let (idx, exp) = match body.split_once('^') {
                Some((a, b)) => (a, b.parse::<i64>().map_err(|_| bad())?),
                None => (body, 1),
            };
            let i: usize = idx.parse().map_err(|_| bad())?;
            if i == 0 || i > rank {
                return Err(Error::GeneratorOutOfRange { index: i, rank });
            }
            w.push(i as u32, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Basis::X))
    }
}

/// An endomorphism of `F_n` given by the images of the generators of `basis`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    basis: Basis,
    images: Vec<FreeWord>,
}

impl Automorphism {
    pub fn identity(rank: usize, basis: Basis) -> Self {
        Automorphism { basis, images: (1..=rank).map(|i| FreeWord::generator(rank, i).unwrap()).collect() }
    }

    pub fn from_images(basis: Basis, images: Vec<FreeWord>) -> Self {
        Automorphism { basis, images }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &FreeWord {
        &self.images[i - 1]
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.basis, other.basis);
        Automorphism { basis: self.basis, images: other.images.iter().map(|w| self.apply(w)).collect() }
    }

    /// The same map written in the other alphabet.
    pub fn in_basis(&self, basis: Basis) -> Automorphism {
        if basis == self.basis {
            return self.clone();
        }
        let n = self.rank();
        let images = (1..=n)
            .map(|i| {
                let gen = FreeWord::generator(n, i).unwrap().change_of_basis(basis, self.basis);
                self.apply(&gen).change_of_basis(self.basis, basis)
            })
            .collect();
        Automorphism { basis, images }
    }
}

/// `h_{σ_i^{±1}}` on `F_n`, written in `basis`.
pub fn artin_generator(n: usize, letter: i32, basis: Basis) -> Result<Automorphism> {
    let i = letter.unsigned_abs() as usize;
    if letter == 0 {
        return Err(Error::ZeroLetter);
    }
    if i >= n {
        return Err(Error::LetterOutOfRange { index: i, strands: n });
    }
    let mut aut = Automorphism::identity(n, basis);
    let w = |letters: &[i32]| FreeWord::from_letters(n, letters).unwrap();
    let (a, b) = (i as i32, i as i32 + 1);
    match basis {
        Basis::X => {
            if letter > 0 {
                aut.images[i - 1] = w(&[a, b, -a]);
                aut.images[i] = w(&[a]);
            } else {
                aut.images[i - 1] = w(&[b]);
                aut.images[i] = w(&[-b, a, b]);
            }
        }
        Basis::G => {
            // g_0 = 1
            let prev: &[i32] = if i > 1 { &[a - 1] } else { &[] };
            let mut letters = Vec::new();
            if letter > 0 {
                letters.push(b);
                letters.push(-a);
                letters.extend_from_slice(prev);
            } else {
                letters.extend_from_slice(prev);
                letters.push(-a);
                letters.push(b);
            }
            aut.images[i - 1] = w(&letters);
        }
    }
    Ok(aut)
}

/// `h_β`, with words read as right-to-left composition:
/// `h_{αβ} = h_α ∘ h_β`.
pub fn artin_automorphism(beta: &BraidWord, basis: Basis) -> Automorphism {
    let n = beta.strands();
    let mut acc = Automorphism::identity(n, basis);
    for &l in beta.letters() {
        let step = artin_generator(n, l, basis).expect("braid letters are validated on construction");
        acc = acc.compose(&step);
    }
    acc
}

pub fn artin_act(beta: &BraidWord, w: &FreeWord, basis: Basis) -> Result<FreeWord> {
    if w.rank() != beta.strands() {
        return Err(Error::RankMismatch { expected: beta.strands(), found: w.rank() });
    }
    Ok(artin_automorphism(beta, basis).apply(w))
}

/// `∂u/∂(gen_i)` in the integral group ring of `F_n`.
pub fn fox_derivative(u: &FreeWord, i: usize, basis: Basis) -> Result<GroupRingElement> {
    let n = u.rank();
    if i == 0 || i > n {
        return Err(Error::GeneratorOutOfRange { index: i, rank: n });
    }
    let group = CoefficientGroup::Free { rank: n, basis };
    let mut out = GroupRingElement::zero(group);
    let mut prefix = FreeWord::identity(n);
    for l in u.letters() {
        let g = l.unsigned_abs() as usize;
        if g == i {
            if l > 0 {
                out.add_term(GroupElem::Word(prefix.clone()), TPoly::one());
                prefix.push(g as u32, 1);
            } else {
                prefix.push(g as u32, -1);
                out.add_term(GroupElem::Word(prefix.clone()), TPoly::from_int(-1));
            }
        } else {
            prefix.push(g as u32, l.signum() as i64);
        }
    }
    Ok(out)
}

/// Fox jacobian `J_{ij} = ∂φ(gen_j)/∂gen_i`.
pub fn fox_jacobian(aut: &Automorphism) -> Vec<Vec<GroupRingElement>> {
    let n = aut.rank();
    (1..=n)
        .map(|i| (1..=n).map(|j| fox_derivative(aut.image(j), i, aut.basis()).unwrap()).collect())
        .collect()
}
