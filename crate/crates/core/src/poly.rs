//! Exact Laurent polynomials over ℚ and determinants of matrices over
//! commutative rings.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// Minimal commutative ring interface used by [`determinant`].
pub trait CommRing: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;

    fn ring_sub(&self, other: &Self) -> Self {
        self.ring_add(&other.ring_neg())
    }
}

impl CommRing for Rational {
    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn ring_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

/// Determinant by cofactor expansion, memoised over column subsets.
///
/// Panics if the matrix is not square or has more than 63 columns.
pub fn determinant<R: CommRing>(m: &[Vec<R>]) -> R {
    let n = m.len();
    if n == 0 {
        return R::ring_one();
    }
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    assert!(n < 64);
    // memo[mask] = det of rows (n - |mask|).. with columns in mask
    let mut memo: BTreeMap<u64, R> = BTreeMap::new();
    memo.insert(0, R::ring_one());
    for size in 1..=n {
        let row = n - size;
        let mut next = BTreeMap::new();
        for mask in subsets(n, size) {
            let mut acc = R::ring_zero();
            let mut pos = 0usize;
            for c in 0..n {
                if mask & (1 << c) == 0 {
                    continue;
                }
                let entry = &m[row][c];
                if !entry.ring_is_zero() {
                    let minor = &memo[&(mask & !(1 << c))];
                    if !minor.ring_is_zero() {
                        let term = entry.ring_mul(minor);
                        acc = if pos.is_multiple_of(2) { acc.ring_add(&term) } else { acc.ring_sub(&term) };
                    }
                }
                pos += 1;
            }
            next.insert(mask, acc);
        }
        memo = next;
    }
    memo.remove(&((1u64 << n) - 1)).unwrap()
}

fn subsets(n: usize, size: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize == size {
            out.push(mask);
        }
    }
    out
}

/// Σ cₖ vᵏ with k ∈ ℤ and rational cₖ. No zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

/// Laurent polynomial in the Burau parameter `t`.
pub type TPoly = LaurentPoly;

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        LaurentPoly { coeffs }
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Rational::from_integer(BigInt::from(c)))))
    }

    pub fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next_back()
    }

    /// `Some((c, k))` when the polynomial is the single term `c vᵏ`.
    pub fn as_monomial(&self) -> Option<(&Rational, i64)> {
        if self.coeffs.len() == 1 {
            let (&k, c) = self.coeffs.iter().next().unwrap();
            Some((c, k))
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, ca) in &self.coeffs {
            for (&b, cb) in &other.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Multiplies by `vᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `p(v⁻¹)`.
    pub fn reflect(&self) -> Self {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.clone())).collect() }
    }

    /// Exact value at a rational point. Panics at 0 if a negative power is present.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&k, c) in &self.coeffs {
            acc += c * rational_pow(x, k);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, c)| c.to_f64().unwrap_or(f64::NAN) * Float::powi(x, k as i32))
            .sum()
    }

    /// Exact quotient `self / d` if `d` divides `self` in ℚ[v, v⁻¹].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d_low = d.min_degree().unwrap();
        let d_high = d.max_degree().unwrap();
        let d_lead = d.coeff(d_high);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let r_high = rem.max_degree().unwrap();
            if r_high - d_high < rem.min_degree().unwrap() - d_low {
                return None;
            }
            let c = rem.coeff(r_high) / &d_lead;
            let k = r_high - d_high;
            quot.add_term(k, c.clone());
            rem = rem.sub(&d.shift(k).scale(&c));
        }
        Some(quot)
    }

    /// Unit normalisation `±vᵏ p` with lowest degree 0 and positive leading
    /// coefficient.
    pub fn normalize_units(&self) -> Self {
        let Some(low) = self.min_degree() else {
            return Self::zero();
        };
        let shifted = self.shift(-low);
        if shifted.leading_coeff().is_some_and(|c| c.is_negative()) {
            shifted.neg()
        } else {
            shifted
        }
    }

    /// Coefficients as `f64`, from lowest to highest degree, plus the lowest degree.
    pub fn dense_f64(&self) -> (i64, Vec<f64>) {
        let Some(low) = self.min_degree() else {
            return (0, Vec::new());
        };
        let high = self.max_degree().unwrap();
        let mut out = vec![0.0; (high - low + 1) as usize];
        for (&k, c) in &self.coeffs {
            out[(k - low) as usize] = c.to_f64().unwrap_or(f64::NAN);
        }
        (low, out)
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (&k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = abs.is_one();
            if k == 0 {
                out.push_str(&abs.to_string());
                continue;
            }
            if !unit {
                out.push_str(&abs.to_string());
                out.push(' ');
            }
            out.push_str(var);
            if k != 1 {
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
        out
    }
}

pub(crate) fn rational_pow(x: &Rational, k: i64) -> Rational {
    use num_traits::Pow;
    if k >= 0 {
        Pow::pow(x, k as u64)
    } else {
        Pow::pow(x.recip(), k.unsigned_abs())
    }
}

impl CommRing for LaurentPoly {
    fn ring_zero() -> Self {
        LaurentPoly::zero()
    }
    fn ring_one() -> Self {
        LaurentPoly::one()
    }
    fn ring_is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn ring_neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

/// Laurent polynomial in a fixed number of commuting variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    nvars: usize,
    coeffs: BTreeMap<Vec<i64>, Rational>,
}

impl MultiLaurent {
    pub fn zero(nvars: usize) -> Self {
        MultiLaurent { nvars, coeffs: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Rational::one(), vec![0; nvars])
    }

    pub fn monomial(c: Rational, exps: Vec<i64>) -> Self {
        let nvars = exps.len();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exps, c);
        }
        MultiLaurent { nvars, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<i64>, c: Rational) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exps.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> + '_ {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Variables that occur with a nonzero exponent in some term.
    pub fn active_variables(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.coeffs.keys().any(|e| e[v] != 0)).collect()
    }

    /// Keeps only the listed variables; the others must be absent.
    pub fn restrict(&self, vars: &[usize]) -> MultiLaurent {
        let mut out = MultiLaurent::zero(vars.len());
        for (e, c) in &self.coeffs {
            out.add_term(vars.iter().map(|&v| e[v]).collect(), c.clone());
        }
        out
    }

    /// Views a one-variable polynomial as a [`LaurentPoly`].
    pub fn to_univariate(&self) -> Option<LaurentPoly> {
        if self.nvars != 1 {
            return None;
        }
        Some(LaurentPoly::from_terms(self.coeffs.iter().map(|(e, c)| (e[0], c.clone()))))
    }

    pub fn neg(&self) -> Self {
        MultiLaurent { nvars: self.nvars, coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiLaurent::zero(self.nvars);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }

    /// Floating-point copy of the terms, for repeated evaluation.
    pub fn to_f64_terms(&self) -> Vec<(Vec<i64>, f64)> {
        self.coeffs.iter().map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN))).collect()
    }
}

impl CommRing for MultiLaurent {
    // The ring identity of an unknown arity is represented with zero variables;
    // `determinant` only calls these on entries of the matrix, so the
    // arity is fixed up by `determinant_multi`.
    fn ring_zero() -> Self {
        MultiLaurent::zero(0)
    }
    fn ring_one() -> Self {
        MultiLaurent::one(0)
    }
    fn ring_is_zero(&self) -> bool {
        MultiLaurent::is_zero(self)
    }
    fn ring_add(&self, other: &Self) -> Self {
        match (self.nvars, other.nvars) {
            (a, b) if a == b => MultiLaurent::add(self, other),
            _ => self.widen(other.nvars).add(&other.widen(self.nvars)),
        }
    }
    fn ring_mul(&self, other: &Self) -> Self {
        match (self.nvars, other.nvars) {
            (a, b) if a == b => MultiLaurent::mul(self, other),
            _ => self.widen(other.nvars).mul(&other.widen(self.nvars)),
        }
    }
    fn ring_neg(&self) -> Self {
        MultiLaurent::neg(self)
    }
}

impl MultiLaurent {
    // Lifts a zero-variable constant to `n` variables.
    fn widen(&self, n: usize) -> Self {
        if self.nvars >= n {
            return self.clone();
        }
        assert_eq!(self.nvars, 0, "variable counts differ");
        let mut out = MultiLaurent::zero(n);
        for c in self.coeffs.values() {
            out.add_term(vec![0; n], c.clone());
        }
        out
    }
}

/// Determinant of a square matrix of [`MultiLaurent`]s in `nvars` variables.
pub fn determinant_multi(m: &[Vec<MultiLaurent>], nvars: usize) -> MultiLaurent {
    let d = determinant(m);
    d.widen(nvars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[(0, 1), (1, 1)]);
        let b = p(&[(0, 1), (1, -1)]);
        assert_eq!(a.mul(&b), p(&[(0, 1), (2, -1)]));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.pow(3), p(&[(0, 1), (1, 3), (2, 3), (3, 1)]));
        assert_eq!(p(&[(-1, 2)]).reflect(), p(&[(1, 2)]));
    }

    #[test]
    fn exact_division() {
        let num = p(&[(3, -1), (0, -1)]);
        let den = p(&[(0, 1), (1, 1)]);
        assert_eq!(num.div_exact(&den).unwrap(), p(&[(2, -1), (1, 1), (0, -1)]));
        assert!(p(&[(0, 1), (2, 1)]).div_exact(&den).is_none());
        let shifted = p(&[(-2, 1), (-1, 1)]);
        assert_eq!(shifted.div_exact(&den).unwrap(), p(&[(-2, 1)]));
    }

    #[test]
    fn normalisation_and_display() {
        let q = p(&[(-1, -1), (0, 1), (1, -1)]).normalize_units();
        assert_eq!(q, p(&[(0, 1), (1, -1), (2, 1)]));
        assert_eq!(q.display_with("s"), "s^2 - s + 1");
        assert_eq!(p(&[(0, 1), (1, -3), (2, 1)]).display_with("s"), "s^2 - 3 s + 1");
        assert_eq!(p(&[(-1, -1)]).display_with("t"), "-t^-1");
        assert_eq!(LaurentPoly::zero().display_with("t"), "0");
    }

    #[test]
    fn evaluation() {
        let q = p(&[(-1, 2), (1, 1)]);
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(q.eval(&half), Rational::new(BigInt::from(9), BigInt::from(2)));
        assert!((q.eval_f64(0.5) - 4.5).abs() < 1e-15);
    }

    #[test]
    fn determinants() {
        let r = |v: i64| Rational::from_integer(BigInt::from(v));
        let m = vec![vec![r(2), r(1), r(0)], vec![r(1), r(3), r(1)], vec![r(0), r(1), r(4)]];
        assert_eq!(determinant(&m), r(18));

        let s = LaurentPoly::var();
        let m = vec![
            vec![s.neg(), LaurentPoly::zero()],
            vec![LaurentPoly::one(), LaurentPoly::one()],
        ];
        assert_eq!(determinant(&m), s.neg());

        let x = MultiLaurent::monomial(r(1), vec![1, 0]);
        let y = MultiLaurent::monomial(r(1), vec![0, 1]);
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        let d = determinant_multi(&m, 2);
        let expect = x.mul(&x).add(&y.mul(&y).neg());
        assert_eq!(d, expect);
        assert_eq!(determinant_multi(&[], 2), MultiLaurent::one(2));
    }
}
