//! Trace moments `tr(B^k)` of group-ring matrices and the logarithmic series
//! for `ln det(B + ε)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groupring::{CoefficientGroup, GroupElem, GroupRingMatrix};
use crate::Rational;

/// One integer term `c·g` of a matrix entry, `g` given by its signed letters.
pub(crate) type WordTerm = (Vec<i32>, BigInt);

fn dense_zero(p: usize) -> Vec<BigInt> {
    vec![BigInt::zero(); p * p]
}

/// `tr(W^k)` for `k = 0..=len` where `W` is a square matrix over `ℤ[F_rank]` and
/// the product is the plain ring product.
///
/// Walks in the Cayley tree are counted through first-return generating
/// functions. States are the `m` matrix indices plus one state for each
/// interior position of each term; a step of the walk reads one letter.
pub(crate) fn walk_moments(w: &[Vec<Vec<WordTerm>>], rank: usize, len: usize) -> Vec<BigInt> {
    let m = w.len();
    let mut p = m;
    let dirs = 2 * rank;
    let dir = |l: i32| 2 * (l.unsigned_abs() as usize - 1) + usize::from(l < 0);
    // transitions per direction: (from, to, weight, starts a term)
    let mut trans: Vec<Vec<(usize, usize, BigInt, bool)>> = vec![Vec::new(); dirs];
    let mut d_mat = dense_zero(0);
    let mut identity_terms = Vec::new();
    for (i, row) in w.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (letters, c) in entry {
                if c.is_zero() {
                    continue;
                }
                if letters.is_empty() {
                    identity_terms.push((i, j, c.clone()));
                    continue;
                }
                let mut prev = i;
                for (idx, &l) in letters.iter().enumerate() {
                    let next = if idx + 1 == letters.len() {
                        j
                    } else {
                        p += 1;
                        p - 1
                    };
                    let weight = if idx == 0 { c.clone() } else { BigInt::one() };
                    trans[dir(l)].push((prev, next, weight, idx == 0));
                    prev = next;
                }
            }
        }
    }
    if p > 0 {
        d_mat = dense_zero(p);
        for (i, j, c) in identity_terms {
            d_mat[i * p + j] += c;
        }
    }
    // columns of L_l that E_l = T_l L_l T_{l⁻¹} reads
    let cols: Vec<Vec<usize>> = (0..dirs)
        .map(|l| {
            let mut c: Vec<usize> = trans[l ^ 1].iter().map(|t| t.0).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    let ident = {
        let mut id = dense_zero(p);
        for i in 0..p {
            id[i * p + i] = BigInt::one();
        }
        id
    };
    let mut e: Vec<Vec<Vec<BigInt>>> = vec![vec![dense_zero(p)]; dirs];
    let mut l_ser: Vec<Vec<Vec<BigInt>>> = vec![vec![ident.clone()]; dirs];
    let mut r_ser: Vec<Vec<BigInt>> = vec![ident];
    let mut etot: Vec<Vec<BigInt>> = vec![dense_zero(p)];
    let mut moments = vec![BigInt::from(m)];

    // S_l[a] = [a = 1]·D + Σ_{l' ≠ l⁻¹} E_{l'}[a]
    let s_entry = |etot: &[Vec<BigInt>], e: &[Vec<Vec<BigInt>>], l: Option<usize>, a: usize, idx: usize| -> BigInt {
        let mut v = etot[a][idx].clone();
        if let Some(l) = l {
            v -= &e[l ^ 1][a][idx];
        }
        if a == 1 {
            v += &d_mat[idx];
        }
        v
    };
    let e_coef = |lser: &[Vec<BigInt>], l: usize, d: usize| -> Vec<BigInt> {
        let mut out = dense_zero(p);
        for (a, b, wa, za) in &trans[l] {
            for (c, dd, wb, zb) in &trans[l ^ 1] {
                let shift = usize::from(*za) + usize::from(*zb);
                if shift > d {
                    continue;
                }
                let lv = &lser[d - shift][b * p + c];
                if lv.is_zero() {
                    continue;
                }
                out[a * p + dd] += wa * wb * lv;
            }
        }
        out
    };

    for d in 1..=len {
        let mut base: Vec<Vec<BigInt>> = Vec::with_capacity(dirs);
        for l in 0..dirs {
            let mut acc = dense_zero(p);
            for a in 1..d {
                let rhs = &l_ser[l][d - a];
                for i in 0..p {
                    for k in 0..p {
                        let s = s_entry(&etot, &e, Some(l), a, i * p + k);
                        if s.is_zero() {
                            continue;
                        }
                        for &j in &cols[l] {
                            let r = &rhs[k * p + j];
                            if !r.is_zero() {
                                acc[i * p + j] += &s * r;
                            }
                        }
                    }
                }
            }
            base.push(acc);
        }
        for l in 0..dirs {
            e[l].push(dense_zero(p));
            l_ser[l].push(dense_zero(p));
        }
        etot.push(dense_zero(p));
        loop {
            for l in 0..dirs {
                let mut cur = base[l].clone();
                for i in 0..p {
                    for &j in &cols[l] {
                        cur[i * p + j] += s_entry(&etot, &e, Some(l), d, i * p + j);
                    }
                }
                l_ser[l][d] = cur;
            }
            let mut changed = false;
            for l in 0..dirs {
                let next = e_coef(&l_ser[l], l, d);
                if next != e[l][d] {
                    e[l][d] = next;
                    changed = true;
                }
            }
            let mut tot = dense_zero(p);
            for l in 0..dirs {
                for (t, v) in tot.iter_mut().zip(&e[l][d]) {
                    *t += v;
                }
            }
            etot[d] = tot;
            if !changed {
                break;
            }
        }
        let mut rd = dense_zero(p);
        for a in 1..=d {
            let rhs = &r_ser[d - a];
            for i in 0..p {
                for k in 0..p {
                    let s = s_entry(&etot, &e, None, a, i * p + k);
                    if s.is_zero() {
                        continue;
                    }
                    for j in 0..m {
                        let r = &rhs[k * p + j];
                        if !r.is_zero() {
                            rd[i * p + j] += &s * r;
                        }
                    }
                }
            }
        }
        moments.push((0..m).map(|i| rd[i * p + i].clone()).sum());
        r_ser.push(rd);
    }
    moments
}

/// Common denominator of every coefficient.
fn common_denominator(b: &GroupRingMatrix) -> Result<BigInt> {
    let mut den = BigInt::one();
    for e in b.entries() {
        let terms = e.constant_terms().ok_or_else(|| Error::InvalidParameter("coefficients depend on t".into()))?;
        for (_, c) in terms {
            den = den.lcm(c.denom());
        }
    }
    Ok(den)
}

/// `tr(B^{∘k})` for `k = 0..=len`, exactly. Coefficients must be constant.
pub fn trace_moments(b: &GroupRingMatrix, len: usize) -> Result<Vec<Rational>> {
    if !b.is_square() {
        return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let m = b.rows();
    let den = common_denominator(b)?;
    let scaled = |c: &Rational| -> BigInt { (c * Rational::from_integer(den.clone())).to_integer() };
    // tr(B^{∘k}) = tr((Bᵀ)^k) with the ring product
    let raw = match b.group() {
        CoefficientGroup::Free { rank, .. } => {
            let w: Vec<Vec<Vec<WordTerm>>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            b.get(j, i)
                                .constant_terms()
                                .unwrap_or_default()
                                .iter()
                                .map(|(g, c)| match g {
                                    GroupElem::Word(word) => (word.letters(), scaled(c)),
                                    GroupElem::Lattice(_) => unreachable!(),
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            walk_moments(&w, rank, len)
        }
        _ => {
            let w: Vec<Vec<BTreeMap<Vec<i64>, BigInt>>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            b.get(j, i)
                                .constant_terms()
                                .unwrap_or_default()
                                .iter()
                                .map(|(g, c)| match g {
                                    GroupElem::Lattice(v) => (v.clone(), scaled(c)),
                                    GroupElem::Word(_) => unreachable!(),
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            lattice_moments(&w, len)
        }
    };
    let mut out = Vec::with_capacity(raw.len());
    let mut dk = BigInt::one();
    for v in raw {
        out.push(Rational::new(v, dk.clone()));
        dk *= &den;
    }
    Ok(out)
}

/// `tr(W^k)` over `ℤ[ℤ^d]` by exact powering.
fn lattice_moments(w: &[Vec<BTreeMap<Vec<i64>, BigInt>>], len: usize) -> Vec<BigInt> {
    let m = w.len();
    let mut power: Vec<Vec<BTreeMap<Vec<i64>, BigInt>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut e = BTreeMap::new();
                    if i == j {
                        let d = w.iter().flatten().flat_map(|x| x.keys()).map(Vec::len).next().unwrap_or(1);
                        e.insert(vec![0; d], BigInt::one());
                    }
                    e
                })
                .collect()
        })
        .collect();
    let mut out = vec![BigInt::from(m)];
    for _ in 0..len {
        let mut next: Vec<Vec<BTreeMap<Vec<i64>, BigInt>>> = vec![vec![BTreeMap::new(); m]; m];
        for i in 0..m {
            for k in 0..m {
                for (g, a) in &power[i][k] {
                    for j in 0..m {
                        for (h, b) in &w[k][j] {
                            let key: Vec<i64> = g.iter().zip(h).map(|(x, y)| x + y).collect();
                            *next[i][j].entry(key).or_insert_with(BigInt::zero) += a * b;
                        }
                    }
                }
            }
        }
        for row in next.iter_mut() {
            for e in row.iter_mut() {
                e.retain(|_, v| !v.is_zero());
            }
        }
        power = next;
        out.push(
            (0..m)
                .map(|i| power[i][i].iter().find(|(g, _)| g.iter().all(|&x| x == 0)).map(|(_, v)| v.clone()).unwrap_or_default())
                .sum(),
        );
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// Levin's u-transform of the partial sums of `a`, using all terms.
pub fn levin_u(a: &[Rational], beta: i64) -> Option<Rational> {
    if a.len() < 2 || a.iter().any(Zero::is_zero) {
        return None;
    }
    let k = a.len() - 1;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    let mut s = Rational::zero();
    for (j, aj) in a.iter().enumerate() {
        s += aj;
        let nj = BigInt::from(beta + j as i64 + 1);
        let mut w = Rational::from_integer(binomial(k, j) * num_traits::pow(nj.clone(), k - 1));
        if j % 2 == 1 {
            w = -w;
        }
        let omega = Rational::from_integer(nj) * aj;
        num += &w * &s / &omega;
        den += &w / &omega;
    }
    if den.is_zero() {
        return None;
    }
    Some(num / den)
}

/// Aitken's Δ² transform of a sequence.
pub fn aitken(s: &[f64]) -> Vec<f64> {
    s.windows(3)
        .map(|w| {
            let d = w[2] - 2.0 * w[1] + w[0];
            if d == 0.0 {
                w[2]
            } else {
                w[2] - (w[2] - w[1]) * (w[2] - w[1]) / d
            }
        })
        .collect()
}

/// Richardson table for values at step sizes `h, h/ratio, h/ratio², …`.
/// Row `j` removes the error terms `h^1 … h^j`.
pub fn richardson(vals: &[f64], ratio: f64) -> Vec<Vec<f64>> {
    let mut table = vec![vals.to_vec()];
    for j in 1..vals.len() {
        let f = ratio.powi(j as i32);
        let prev = &table[j - 1];
        let row = (0..prev.len() - 1).map(|i| (f * prev[i + 1] - prev[i]) / (f - 1.0)).collect();
        table.push(row);
    }
    table
}

/// Same recursion applied to error magnitudes with absolute weights.
pub fn richardson_errors(errs: &[f64], ratio: f64) -> Vec<Vec<f64>> {
    let mut table = vec![errs.to_vec()];
    for j in 1..errs.len() {
        let f = ratio.powi(j as i32);
        let prev = &table[j - 1];
        let row = (0..prev.len() - 1).map(|i| (f * prev[i + 1] + prev[i]) / (f - 1.0)).collect();
        table.push(row);
    }
    table
}

/// Outcome of summing the logarithmic series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSum {
    pub ln_det: f64,
    pub error: Option<f64>,
    pub accelerated: bool,
    pub terms: usize,
}

/// Tail of a series with terms decaying like a power law, if the decay is fast
/// enough to make the estimate meaningful.
fn power_tail(a: &[f64]) -> Option<f64> {
    let k = a.len();
    if k < 4 {
        return None;
    }
    let last = a[k - 1].abs();
    if last == 0.0 {
        return Some(0.0);
    }
    let half = a[k / 2 - 1].abs();
    let p = (half / last).ln() / (k as f64 / (k / 2) as f64).ln();
    if p > 1.05 {
        Some(last * k as f64 / (p - 1.0))
    } else {
        None
    }
}

/// Levin transforms compared when estimating the error of the last one.
const LEVIN_WINDOW: usize = 8;

/// Largest distance from `levels[0]` to the other transforms, floored at
/// rounding level.
fn levin_spread(levels: &[f64]) -> f64 {
    let spread = levels[1..].iter().map(|v| (v - levels[0]).abs()).fold(0.0, f64::max);
    spread.max(4.0 * f64::EPSILON * levels[0].abs())
}

/// `ln det(B + ε)` from the moments `μ_j = tr(B^j)`, given `c ≥ ‖B‖`:
/// `m ln c' − Σ_k tr((r − B/c')^k)/k` with `c' = c + ε`, `r = 1 − ε/c'`.
pub fn log_det_series(moments: &[Rational], c: &Rational, eps: &Rational, accel: bool) -> SeriesSum {
    let len = moments.len() - 1;
    let cp = c + eps;
    let r = Rational::one() - eps / &cp;
    let neg_inv = -(Rational::one() / &cp);
    let m = moments[0].to_f64().unwrap_or(0.0);
    let mut terms = Vec::with_capacity(len);
    for k in 1..=len {
        let mut tr = Rational::zero();
        for (j, mu) in moments.iter().enumerate().take(k + 1) {
            if mu.is_zero() {
                continue;
            }
            let coef = Rational::from_integer(binomial(k, j));
            tr += coef * num_traits::pow(r.clone(), k - j) * num_traits::pow(neg_inv.clone(), j) * mu;
        }
        terms.push(tr / Rational::from_integer(BigInt::from(k)));
    }
    let ln_c = cp.to_f64().unwrap_or(f64::NAN).ln();
    let total = |s: f64| m * ln_c - s;
    let floats: Vec<f64> = terms.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect();
    let plain: f64 = floats.iter().sum();
    if terms.iter().all(Zero::is_zero) {
        return SeriesSum { ln_det: total(0.0), error: Some(0.0), accelerated: false, terms: len };
    }
    if accel {
        let levels: Option<Vec<f64>> = (0..=LEVIN_WINDOW.min(len.saturating_sub(2)))
            .map(|d| levin_u(&terms[..len - d], 1).map(|l| l.to_f64().unwrap_or(f64::NAN)).filter(|v| v.is_finite()))
            .collect();
        if let Some(levels) = levels.filter(|l| l.len() >= 2) {
            return SeriesSum { ln_det: total(levels[0]), error: Some(levin_spread(&levels)), accelerated: true, terms: len };
        }
    }
    SeriesSum { ln_det: total(plain), error: power_tail(&floats), accelerated: false, terms: len }
}
