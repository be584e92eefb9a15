//! Fuglede–Kadison determinants of matrices over `ℚ[ℤ]`, `ℚ[ℤᵈ]` and `ℚ[F_n]`.
//!
//! Every backend computes the regular determinant: an operator detected as
//! non-injective has determinant `0`.

mod quadrature;
mod roots;
mod series;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groupring::{CoefficientGroup, GroupElem, GroupRingElement, GroupRingMatrix};
use crate::poly::{determinant_multi, LaurentPoly, MultiLaurent, TPoly};
use crate::Rational;

pub use quadrature::{mahler_quadrature, QuadratureResult, MAX_POINTS};
pub use roots::mahler_measure;
pub use series::{aitken, levin_u, log_det_series, richardson, richardson_errors, trace_moments, SeriesSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Roots,
    Quadrature,
    TraceSeries,
    EpsilonReg,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Roots => "roots",
            Method::Quadrature => "quad",
            Method::TraceSeries => "series",
            Method::EpsilonReg => "eps",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roots" => Ok(Method::Roots),
            "quad" | "quadrature" => Ok(Method::Quadrature),
            "series" | "trace_series" => Ok(Method::TraceSeries),
            "eps" | "epsilon_reg" => Ok(Method::EpsilonReg),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// A determinant value with an error estimate. `error_bound` is `None` when no
/// meaningful bound is available.
#[derive(Debug, Clone, PartialEq)]
pub struct FkEstimate {
    pub value: f64,
    pub error_bound: Option<f64>,
    pub method: Method,
    pub diagnostics: BTreeMap<String, String>,
}

impl FkEstimate {
    fn exact(value: f64, method: Method) -> Self {
        FkEstimate { value, error_bound: Some(0.0), method, diagnostics: BTreeMap::new() }
    }

    fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.diagnostics.insert(key.into(), value.to_string());
        self
    }

    /// Multiplies value and bound by a positive constant.
    pub fn scaled(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.error_bound = self.error_bound.map(|e| e * factor);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetOptions {
    /// `None` picks a backend from the coefficient group.
    pub method: Option<Method>,
    pub grid: usize,
    pub series_len: usize,
    pub accel: bool,
    pub epsilons: Vec<Rational>,
    pub regular: bool,
}

impl Default for DetOptions {
    fn default() -> Self {
        DetOptions {
            method: None,
            grid: 256,
            series_len: 30,
            accel: true,
            epsilons: [16, 64, 256, 1024].iter().map(|&d| Rational::new(BigInt::one(), BigInt::from(d))).collect(),
            regular: true,
        }
    }
}

/// Converts `t0` to a rational, preferring a short continued fraction when it
/// reproduces the float.
pub fn rational_t(t0: f64) -> Result<Rational> {
    if t0.is_nan() || t0 <= 0.0 || !t0.is_finite() {
        return Err(Error::NonPositiveT(t0));
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = t0;
    for _ in 0..40 {
        let a = x.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = Rational::new(h1.clone(), k1.clone());
        if approx.to_f64() == Some(t0) {
            return Ok(approx);
        }
        let frac = x - a;
        if frac == 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    Rational::from_float(t0).ok_or(Error::NonPositiveT(t0))
}

fn require_square(m: &GroupRingMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: m.rows(), cols: m.cols() })
    }
}

fn lattice_entry(e: &GroupRingElement, d: usize) -> MultiLaurent {
    let mut p = MultiLaurent::zero(d);
    for (g, c) in e.constant_terms().unwrap_or_default() {
        if let GroupElem::Lattice(v) = g {
            p.add_term(v, c);
        }
    }
    p
}

fn lattice_determinant(m: &GroupRingMatrix, t0: &Rational) -> Result<MultiLaurent> {
    let d = m.group().lattice_rank().ok_or_else(|| Error::UnsupportedGroup {
        method: "lattice",
        group: m.group().name(),
    })?;
    let ev = m.evaluate_t(t0)?;
    let rows: Vec<Vec<MultiLaurent>> =
        ev.row_vecs().iter().map(|r| r.iter().map(|e| lattice_entry(e, d)).collect()).collect();
    Ok(determinant_multi(&rows, d))
}

fn zero_estimate(method: Method, regular: bool) -> FkEstimate {
    let e = FkEstimate::exact(0.0, method).note("injective", "false");
    if regular {
        e
    } else {
        e.note("classical", "undefined")
    }
}

/// Determinant over `ℤ` as the Mahler measure of the determinant polynomial.
pub fn det_integers(m: &GroupRingMatrix, t0: f64, regular: bool) -> Result<FkEstimate> {
    require_square(m)?;
    if m.group().lattice_rank() != Some(1) {
        return Err(Error::UnsupportedGroup { method: "roots", group: m.group().name() });
    }
    let t = rational_t(t0)?;
    let p = lattice_determinant(m, &t)?.to_univariate().unwrap_or_else(LaurentPoly::zero);
    Ok(roots_estimate(&p, regular))
}

fn roots_estimate(p: &LaurentPoly, regular: bool) -> FkEstimate {
    if p.is_zero() {
        return zero_estimate(Method::Roots, regular);
    }
    let (value, err) = mahler_measure(p);
    FkEstimate { value, error_bound: Some(err), method: Method::Roots, diagnostics: BTreeMap::new() }
        .note("polynomial", p.display_with("z"))
}

/// Determinant over `ℤᵈ` by quadrature of `log|P|` on the torus.
pub fn det_free_abelian(m: &GroupRingMatrix, t0: f64, grid: usize) -> Result<FkEstimate> {
    require_square(m)?;
    if grid < 64 {
        return Err(Error::InvalidParameter(format!("grid must be at least 64, got {grid}")));
    }
    if m.group().lattice_rank().is_none() {
        return Err(Error::UnsupportedGroup { method: "quad", group: m.group().name() });
    }
    let t = rational_t(t0)?;
    let p = lattice_determinant(m, &t)?;
    if p.is_zero() {
        return Ok(zero_estimate(Method::Quadrature, true));
    }
    let q = mahler_quadrature(&p, grid);
    let mut est = FkEstimate {
        value: q.value,
        error_bound: Some(q.error_bound),
        method: Method::Quadrature,
        diagnostics: BTreeMap::new(),
    }
    .note("active_variables", p.active_variables().len())
    .note("terms", p.num_terms());
    if let Some(&(n, _)) = q.levels.last() {
        est = est.note("grid", n);
        let trace: Vec<String> = q.levels.iter().map(|(n, v)| format!("{n}:{v:.12}")).collect();
        est = est.note("levels", trace.join(","));
    }
    if q.capped {
        est = est.note("grid_capped", "true");
    }
    Ok(est)
}

/// Result of eliminating monomial pivots from a matrix over a free group.
struct Reduced {
    scale: Rational,
    matrix: Option<GroupRingMatrix>,
    steps: usize,
}

/// Repeatedly removes a row and column through a monomial pivot
/// `c·g`, using `det(M) = |c|·det(S)` with the Schur complement
/// `S_ij = M_ij − M_pj · (c g)⁻¹ · M_iq`. `matrix` is `None` when the operator
/// is found to be non-injective.
fn schur_reduce(m: &GroupRingMatrix) -> Result<Reduced> {
    let mut scale = Rational::one();
    let mut cur = m.clone();
    let mut steps = 0;
    loop {
        let n = cur.rows();
        for i in 0..n {
            if (0..n).all(|j| cur.get(i, j).is_zero()) || (0..n).all(|j| cur.get(j, i).is_zero()) {
                return Ok(Reduced { scale, matrix: None, steps });
            }
        }
        if n == 1 {
            if let Some((_, c)) = cur.get(0, 0).as_monomial() {
                let c = c.as_monomial().map(|(v, _)| v.abs()).unwrap_or_else(Rational::one);
                return Ok(Reduced { scale: scale * c, matrix: Some(GroupRingMatrix::identity(cur.group(), 0)), steps });
            }
            return Ok(Reduced { scale, matrix: Some(cur), steps });
        }
        let pivot = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .find(|&(p, q)| cur.get(p, q).as_monomial().is_some());
        let Some((p, q)) = pivot else {
            return Ok(Reduced { scale, matrix: Some(cur), steps });
        };
        let (g, c) = {
            let (g, c) = cur.get(p, q).as_monomial().unwrap();
            let (v, _) = c.as_monomial().expect("pivot coefficient is constant");
            (g.clone(), v.clone())
        };
        let group = cur.group();
        let inv = GroupRingElement::monomial(group, g.inverse(), TPoly::constant(Rational::one() / &c));
        let keep_r: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        let keep_c: Vec<usize> = (0..n).filter(|&j| j != q).collect();
        let mut rows = Vec::with_capacity(n - 1);
        for &i in &keep_r {
            let mut row = Vec::with_capacity(n - 1);
            for &j in &keep_c {
                let corr = cur.get(p, j).mul(&inv)?.mul(cur.get(i, q))?;
                row.push(cur.get(i, j).sub(&corr)?);
            }
            rows.push(row);
        }
        scale *= c.abs();
        cur = GroupRingMatrix::from_rows(group, rows)?;
        steps += 1;
    }
}

fn free_prepare(m: &GroupRingMatrix, t0: f64) -> Result<(Reduced, Option<(GroupRingMatrix, Rational)>)> {
    require_square(m)?;
    let t = rational_t(t0)?;
    let ev = m.evaluate_t(&t)?;
    let red = schur_reduce(&ev)?;
    let op = match &red.matrix {
        Some(a) if a.rows() > 0 => {
            let b = a.adjoint().compose(a)?;
            let c = norm_bound(&b);
            Some((b, c))
        }
        _ => None,
    };
    Ok((red, op))
}

/// Maximum over rows and columns of the summed `ℓ¹` norms of the entries.
fn norm_bound(b: &GroupRingMatrix) -> Rational {
    let n = b.rows();
    let l1 = |i: usize, j: usize| b.get(i, j).l1_norm().unwrap_or_else(Rational::zero);
    let mut best = Rational::zero();
    for i in 0..n {
        let row = (0..n).fold(Rational::zero(), |acc, j| acc + l1(i, j));
        let col = (0..n).fold(Rational::zero(), |acc, j| acc + l1(j, i));
        for v in [row, col] {
            if v > best {
                best = v;
            }
        }
    }
    best
}

fn finish_free(red: &Reduced, method: Method, series_len: usize) -> FkEstimate {
    let mut e = FkEstimate::exact(red.scale.to_f64().unwrap_or(f64::NAN), method).note("schur_steps", red.steps);
    e = e.note("series_len", series_len);
    e
}

/// Determinant over a free group through the series
/// `ln det B = m ln c − Σ_k tr((1 − B/c)^k)/k` for `B = A*A`.
pub fn det_free_group(m: &GroupRingMatrix, t0: f64, series_len: usize, accel: bool) -> Result<FkEstimate> {
    if !matches!(m.group(), CoefficientGroup::Free { .. }) {
        return Err(Error::UnsupportedGroup { method: "series", group: m.group().name() });
    }
    if series_len < 8 {
        return Err(Error::InvalidParameter(format!("series length must be at least 8, got {series_len}")));
    }
    let (red, op) = free_prepare(m, t0)?;
    let base = finish_free(&red, Method::TraceSeries, series_len);
    let Some(inner) = &red.matrix else {
        return Ok(zero_estimate(Method::TraceSeries, true));
    };
    if inner.rows() == 0 {
        return Ok(base.note("injective", "true"));
    }
    let (b, c) = op.expect("nonempty reduced matrix");
    if c.is_zero() {
        return Ok(zero_estimate(Method::TraceSeries, true));
    }
    let moments = trace_moments(&b, series_len)?;
    let s = log_det_series(&moments, &c, &Rational::zero(), accel);
    let value = red.scale.to_f64().unwrap_or(f64::NAN) * (0.5 * s.ln_det).exp();
    let mut est = FkEstimate {
        value,
        error_bound: s.error.map(|e| value * (0.5 * e).exp_m1()),
        method: Method::TraceSeries,
        diagnostics: base.diagnostics,
    }
    .note("norm_bound", &c)
    .note("accelerated", s.accelerated)
    .note("ln_det_b", format!("{:.15}", s.ln_det));
    est = est.note("injective", if inner.rows() == 1 { "true" } else { "assumed" });
    if s.error.is_none() {
        est = est.note("tail", "unknown");
    }
    Ok(est)
}

/// Determinant from `det(A*A + ε)` at the given `ε`, extrapolated to `ε → 0`.
pub fn det_epsilon_reg(m: &GroupRingMatrix, t0: f64, epsilons: &[Rational], series_len: usize) -> Result<FkEstimate> {
    if epsilons.len() < 2 {
        return Err(Error::InvalidParameter("at least two epsilons are needed".into()));
    }
    if epsilons.iter().any(|e| !e.is_positive()) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("epsilons must be positive and decreasing".into()));
    }
    if series_len < 8 {
        return Err(Error::InvalidParameter(format!("series length must be at least 8, got {series_len}")));
    }
    let (scale, b, c, steps) = match m.group() {
        CoefficientGroup::Free { .. } => {
            let (red, op) = free_prepare(m, t0)?;
            match (&red.matrix, op) {
                (None, _) => return Ok(zero_estimate(Method::EpsilonReg, true)),
                (Some(a), _) if a.rows() == 0 => {
                    return Ok(finish_free(&red, Method::EpsilonReg, series_len).note("injective", "true"))
                }
                (Some(_), Some((b, c))) => (red.scale.clone(), b, c, red.steps),
                (Some(_), None) => unreachable!(),
            }
        }
        _ => {
            require_square(m)?;
            let t = rational_t(t0)?;
            if lattice_determinant(m, &t)?.is_zero() {
                return Ok(zero_estimate(Method::EpsilonReg, true));
            }
            let a = m.evaluate_t(&t)?;
            let b = a.adjoint().compose(&a)?;
            let c = norm_bound(&b);
            (Rational::one(), b, c, 0)
        }
    };
    if c.is_zero() {
        return Ok(zero_estimate(Method::EpsilonReg, true));
    }
    let moments = trace_moments(&b, series_len)?;
    let sums: Vec<SeriesSum> = epsilons.iter().map(|e| log_det_series(&moments, &c, e, true)).collect();
    let vals: Vec<f64> = sums.iter().map(|s| s.ln_det).collect();
    let errs: Vec<f64> = sums.iter().map(|s| s.error.unwrap_or(f64::INFINITY)).collect();
    let ratio = (epsilons[0].clone() / &epsilons[1]).to_f64().unwrap_or(4.0);
    // spectra reaching 0 give a √ε expansion, others an expansion in ε
    let candidates = [ratio.sqrt(), ratio];
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for r in candidates {
        let table = richardson(&vals, r);
        let etab = richardson_errors(&errs, r);
        let diag: Vec<f64> = table.iter().map(|row| *row.last().unwrap()).collect();
        let diffs: Vec<f64> = diag.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        let last = *diffs.last().unwrap();
        let bound = diffs.iter().sum::<f64>() + etab.last().unwrap()[0];
        let value = *diag.last().unwrap();
        if best.is_none_or(|b| last < b.0) {
            best = Some((last, value, bound, r));
        }
    }
    let (_, ln_det, bound, r) = best.unwrap();
    let value = scale.to_f64().unwrap_or(f64::NAN) * (0.5 * ln_det).exp();
    let trace: Vec<String> = vals.iter().map(|v| format!("{v:.12}")).collect();
    Ok(FkEstimate {
        value,
        error_bound: Some(value * (0.5 * bound).exp_m1()),
        method: Method::EpsilonReg,
        diagnostics: BTreeMap::new(),
    }
    .note("series_len", series_len)
    .note("schur_steps", steps)
    .note("norm_bound", &c)
    .note("richardson_ratio", r)
    .note("ln_det_eps", trace.join(",")))
}

/// Picks a backend from the coefficient group unless one is requested.
pub fn determinant(m: &GroupRingMatrix, t0: f64, opts: &DetOptions) -> Result<FkEstimate> {
    require_square(m)?;
    rational_t(t0)?;
    let group = m.group();
    let method = match opts.method {
        Some(method) => method,
        None => match group {
            CoefficientGroup::Integers => Method::Roots,
            CoefficientGroup::FreeAbelian(_) => {
                let p = lattice_determinant(m, &rational_t(t0)?)?;
                if p.active_variables().len() <= 1 {
                    Method::Roots
                } else {
                    Method::Quadrature
                }
            }
            CoefficientGroup::Free { .. } => Method::TraceSeries,
        },
    };
    let free = matches!(group, CoefficientGroup::Free { .. });
    match method {
        Method::Roots if !free => {
            if group == CoefficientGroup::Integers {
                return det_integers(m, t0, opts.regular);
            }
            let p = lattice_determinant(m, &rational_t(t0)?)?;
            let active = p.active_variables();
            if active.len() > 1 {
                return Err(Error::UnsupportedGroup { method: "roots", group: group.name() });
            }
            let uni = if active.is_empty() {
                LaurentPoly::constant(p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero))
            } else {
                p.restrict(&active).to_univariate().unwrap()
            };
            Ok(roots_estimate(&uni, opts.regular))
        }
        Method::Quadrature if !free => det_free_abelian(m, t0, opts.grid),
        Method::Roots | Method::Quadrature => Err(Error::UnsupportedGroup { method: method.name(), group: group.name() }),
        Method::TraceSeries if free => det_free_group(m, t0, opts.series_len, opts.accel),
        Method::TraceSeries => {
            let est = det_epsilon_reg_lattice_free(m, t0, opts)?;
            Ok(est)
        }
        Method::EpsilonReg => det_epsilon_reg(m, t0, &opts.epsilons, opts.series_len),
    }
}

/// The plain series over an abelian group, `ε = 0`.
fn det_epsilon_reg_lattice_free(m: &GroupRingMatrix, t0: f64, opts: &DetOptions) -> Result<FkEstimate> {
    let t = rational_t(t0)?;
    if lattice_determinant(m, &t)?.is_zero() {
        return Ok(zero_estimate(Method::TraceSeries, true));
    }
    let a = m.evaluate_t(&t)?;
    let b = a.adjoint().compose(&a)?;
    let c = norm_bound(&b);
    let moments = trace_moments(&b, opts.series_len)?;
    let s = log_det_series(&moments, &c, &Rational::zero(), opts.accel);
    let value = (0.5 * s.ln_det).exp();
    Ok(FkEstimate {
        value,
        error_bound: s.error.map(|e| value * (0.5 * e).exp_m1()),
        method: Method::TraceSeries,
        diagnostics: BTreeMap::new(),
    }
    .note("series_len", opts.series_len)
    .note("norm_bound", &c))
}
