//! Mahler measure of a multivariable Laurent polynomial by tensor-product
//! quadrature of `log|P|` on the torus.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;

use crate::poly::MultiLaurent;

/// Largest number of sample points in one grid.
pub const MAX_POINTS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_bound: f64,
    /// `(points per axis, mean of log|P|)` for each level, coarse to fine.
    pub levels: Vec<(usize, f64)>,
    pub capped: bool,
}

/// Offset of the sample grid along `axis`, as a fraction of a cell.
///
/// The first axis uses cell midpoints; the others are shifted by multiples of
/// the golden ratio so that diagonal zero sets such as `X = Y` are not sampled.
fn offset(axis: usize) -> f64 {
    let phi = 0.618_033_988_749_894_9;
    let v = 0.5 + phi * axis as f64;
    v - v.floor()
}

fn mean_log(terms: &[(Vec<i64>, f64)], d: usize, n: usize) -> f64 {
    // per-axis phase tables for every exponent that occurs
    let mut exps: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); d];
    for (e, _) in terms {
        for (axis, &k) in e.iter().enumerate() {
            let len = exps[axis].len();
            exps[axis].entry(k).or_insert(len);
        }
    }
    let tables: Vec<Vec<Vec<Complex64>>> = (0..d)
        .map(|axis| {
            let off = offset(axis);
            (0..n)
                .map(|m| {
                    let theta = core::f64::consts::TAU * (m as f64 + off) / n as f64;
                    let mut row = vec![Complex64::new(0.0, 0.0); exps[axis].len()];
                    for (&k, &slot) in &exps[axis] {
                        row[slot] = Complex64::from_polar(1.0, theta * k as f64);
                    }
                    row
                })
                .collect()
        })
        .collect();
    let slots: Vec<(Vec<usize>, f64)> = terms
        .iter()
        .map(|(e, c)| (e.iter().enumerate().map(|(axis, k)| exps[axis][k]).collect(), *c))
        .collect();
    let total = n.pow(d as u32);
    let mut idx = vec![0usize; d];
    let mut sum = 0.0;
    let mut comp = 0.0;
    for _ in 0..total {
        let mut val = Complex64::new(0.0, 0.0);
        for (s, c) in &slots {
            let mut ph = Complex64::new(*c, 0.0);
            for axis in 0..d {
                ph *= tables[axis][idx[axis]][s[axis]];
            }
            val += ph;
        }
        // Kahan summation keeps the result independent of grid size rounding
        let y = val.norm().ln() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        for axis in 0..d {
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
        }
    }
    sum / total as f64
}

/// Mahler measure by quadrature at `grid/4`, `grid/2` and `grid` points per
/// axis. The finest level is returned; the bound is the larger of the two
/// refinement differences.
pub fn mahler_quadrature(p: &MultiLaurent, grid: usize) -> QuadratureResult {
    if p.is_zero() {
        return QuadratureResult { value: 0.0, error_bound: 0.0, levels: Vec::new(), capped: false };
    }
    let active = p.active_variables();
    let q = p.restrict(&active);
    let d = active.len();
    let terms = q.to_f64_terms();
    if d == 0 {
        let v = terms[0].1.abs();
        return QuadratureResult { value: v, error_bound: 0.0, levels: Vec::new(), capped: false };
    }
    let mut n = grid.max(4);
    let mut capped = false;
    while n.checked_pow(d as u32).is_none_or(|t| t > MAX_POINTS) {
        n /= 2;
        capped = true;
    }
    let n = n - n % 4;
    let levels: Vec<(usize, f64)> = [n / 4, n / 2, n].iter().map(|&m| (m, mean_log(&terms, d, m))).collect();
    let fine = levels[2].1;
    let diff = (levels[2].1 - levels[1].1).abs().max((levels[1].1 - levels[0].1).abs());
    let value = fine.exp();
    QuadratureResult { value, error_bound: value * diff.exp_m1(), levels, capped }
}
