//! Mahler measure of a one-variable Laurent polynomial from its roots.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::LaurentPoly;
use crate::Rational;

/// `M(P) = |lead| · Π max(1, |r|)` with its estimated absolute error.
///
/// The polynomial is first split into square-free parts over ℚ so that every
/// root handed to the numerical solver is simple.
pub fn mahler_measure(p: &LaurentPoly) -> (f64, f64) {
    if p.is_zero() {
        return (0.0, 0.0);
    }
    let low = p.min_degree().unwrap();
    let dense: Vec<Rational> = {
        let high = p.max_degree().unwrap();
        (low..=high).map(|k| p.coeff(k)).collect()
    };
    let lead = dense.last().unwrap().abs().to_f64().unwrap_or(f64::NAN);
    let mut value = lead;
    let mut rel_err = 4.0 * f64::EPSILON;
    for (mult, factor) in square_free(&dense) {
        if factor.len() < 2 {
            continue;
        }
        let coeffs: Vec<f64> = factor.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let (roots, corr) = aberth(&coeffs);
        for (r, d) in roots.iter().zip(&corr) {
            let a = r.norm();
            if a > 1.0 {
                value *= a.powi(mult as i32);
            }
            if a + d > 1.0 {
                rel_err += mult as f64 * (d / a.max(1e-300)).min(1.0);
            }
        }
        rel_err += mult as f64 * factor.len() as f64 * 8.0 * f64::EPSILON;
    }
    (value, value * rel_err)
}

/// Yun's square-free decomposition over ℚ: pairs `(multiplicity, monic factor)`,
/// coefficients from the constant term up.
fn square_free(p: &[Rational]) -> Vec<(usize, Vec<Rational>)> {
    let p = monic(p);
    let dp = derivative(&p);
    if dp.is_empty() {
        return vec![(1, p)];
    }
    let mut out = Vec::new();
    let a0 = gcd(&p, &dp);
    let mut b = div_exact(&p, &a0);
    let mut c = div_exact(&dp, &a0);
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let next_b = div_exact(&b, &a);
        c = div_exact(&d, &a);
        if a.len() > 1 {
            out.push((i, a));
        }
        d = sub(&c, &derivative(&next_b));
        b = next_b;
        i += 1;
    }
    out
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn monic(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    match p.last() {
        Some(l) => {
            let l = l.clone();
            p.into_iter().map(|c| c / &l).collect()
        }
        None => p,
    }
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer((k as i64).into())).collect())
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| a.get(k).cloned().unwrap_or_else(Rational::zero) - b.get(k).cloned().unwrap_or_else(Rational::zero))
            .collect(),
    )
}

fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (k, bc) in b.iter().enumerate() {
            r[shift + k] -= bc * &f;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (q, r) = divmod(a, b);
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich iteration followed by Newton polishing. Returns roots and
/// the size of the last Newton step for each.
fn aberth(c: &[f64]) -> (Vec<Complex64>, Vec<f64>) {
    let n = c.len() - 1;
    let lead = c[n];
    let c: Vec<f64> = c.iter().map(|v| v / lead).collect();
    if n == 1 {
        return (vec![Complex64::new(-c[0], 0.0)], vec![0.0]);
    }
    // Fujiwara bound for the initial circle
    let radius = (0..n)
        .map(|k| {
            let v = c[k].abs();
            if k == 0 {
                (v / 2.0).powf(1.0 / n as f64)
            } else {
                v.powf(1.0 / (n - k) as f64)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, core::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += Complex64::one() / (z[k] - z[j]);
                }
            }
            let step = ratio / (Complex64::one() - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    let mut corr = vec![0.0; n];
    for k in 0..n {
        for _ in 0..3 {
            let (p, dp) = horner(&c, z[k]);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            z[k] -= step;
            corr[k] = step.norm();
        }
        corr[k] = corr[k].max(f64::EPSILON * z[k].norm().max(1.0));
    }
    (z, corr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    #[test]
    fn simple_measures() {
        let (v, _) = mahler_measure(&p(&[(0, 1), (1, -2)]));
        assert!((v - 2.0).abs() < 1e-12);
        let (v, _) = mahler_measure(&p(&[(0, 1), (1, 1)]));
        assert!((v - 1.0).abs() < 1e-12);
        let (v, _) = mahler_measure(&p(&[(0, -3)]));
        assert!((v - 3.0).abs() < 1e-15);
        assert_eq!(mahler_measure(&LaurentPoly::zero()).0, 0.0);
    }

    #[test]
    fn figure_eight_and_lehmer() {
        let (v, e) = mahler_measure(&p(&[(0, 1), (1, -3), (2, 1)]));
        assert!((v - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12, "{v} ± {e}");
        let lehmer = p(&[(0, 1), (1, 1), (3, -1), (4, -1), (5, -1), (6, -1), (7, -1), (9, 1), (10, 1)]);
        let (v, _) = mahler_measure(&lehmer);
        assert!((v - 1.176_280_818_259_917).abs() < 1e-12, "{v}");
    }

    #[test]
    fn repeated_roots() {
        // (1 - 2z)^3 (1 + z)^2 z^-4
        let a = p(&[(0, 1), (1, -2)]).pow(3).mul(&p(&[(0, 1), (1, 1)]).pow(2)).shift(-4);
        let (v, e) = mahler_measure(&a);
        assert!((v - 8.0).abs() < 1e-10, "{v} ± {e}");
    }

    #[test]
    fn square_free_parts() {
        let r = |v: i64| Rational::from_integer(v.into());
        // (z - 1)^2 (z + 2)
        let poly = vec![r(2), r(-3), r(0), r(1)];
        let parts = square_free(&poly);
        assert_eq!(parts, vec![(1, vec![r(2), r(1)]), (2, vec![r(-1), r(1)])]);
    }
}
