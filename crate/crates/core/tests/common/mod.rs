#![allow(dead_code)]

use l2burau_core::fkdet::{det_free_abelian, det_free_group, det_integers};
use l2burau_core::freegroup::{artin_automorphism, fox_derivative};
use l2burau_core::torsion::{reduced_burau, reduced_burau_composed, reduced_burau_with, verify_block_triangularization};
use l2burau_core::{
    Basis, BraidWord, CoefficientGroup, EpiFamily, FreeWord, GroupElem, GroupRingElement, GroupRingMatrix, Rational, Sign,
    TPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Outcome = Result<usize, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn random_letters<R: Rng>(r: &mut R, rank: usize, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = r.gen_range(1..=rank as i32);
            if r.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

pub fn random_braid<R: Rng>(r: &mut R, n: usize, max_len: usize) -> BraidWord {
    if n < 2 {
        return BraidWord::identity(n);
    }
    let len = r.gen_range(0..=max_len);
    BraidWord::new(n, random_letters(r, n - 1, len)).unwrap()
}

pub fn random_knot_braid<R: Rng>(r: &mut R, n: usize, max_len: usize) -> BraidWord {
    loop {
        let b = random_braid(r, n, max_len);
        if b.closure_components() == 1 {
            return b;
        }
    }
}

pub fn z_elem(terms: &[(i64, i64)]) -> GroupRingElement {
    let mut e = GroupRingElement::zero(CoefficientGroup::Integers);
    for &(k, c) in terms {
        e.add_term(GroupElem::Lattice(vec![k]), TPoly::from_int(c));
    }
    e
}

pub fn lattice_elem(d: usize, terms: &[(Vec<i64>, i64)]) -> GroupRingElement {
    let mut e = GroupRingElement::zero(CoefficientGroup::FreeAbelian(d));
    for (v, c) in terms {
        e.add_term(GroupElem::Lattice(v.clone()), TPoly::from_int(*c));
    }
    e
}

pub fn free_elem(rank: usize, terms: &[(Vec<i32>, i64)]) -> GroupRingElement {
    let mut e = GroupRingElement::zero(CoefficientGroup::Free { rank, basis: Basis::X });
    for (w, c) in terms {
        e.add_term(GroupElem::Word(FreeWord::from_letters(rank, w).unwrap()), TPoly::from_int(*c));
    }
    e
}

pub fn random_z_elem<R: Rng>(r: &mut R) -> GroupRingElement {
    let k = r.gen_range(1..=3);
    let terms: Vec<(i64, i64)> = (0..k).map(|_| (r.gen_range(-2..=2), r.gen_range(-3..=3))).collect();
    z_elem(&terms)
}

pub fn matrix(group: CoefficientGroup, rows: Vec<Vec<GroupRingElement>>) -> GroupRingMatrix {
    GroupRingMatrix::from_rows(group, rows).unwrap()
}

pub fn random_z_matrix<R: Rng>(r: &mut R, n: usize) -> GroupRingMatrix {
    let rows = (0..n).map(|_| (0..n).map(|_| random_z_elem(r)).collect()).collect();
    matrix(CoefficientGroup::Integers, rows)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// `w − 1 = Σ_i ∂w/∂x_i · (x_i − 1)` in `ℤ[F_n]`, in both alphabets.
pub fn fox_fundamental(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let rank = r.gen_range(1..=4);
        let len = r.gen_range(0..=16);
        let w = FreeWord::from_letters(rank, &random_letters(&mut r, rank, len)).unwrap();
        for basis in [Basis::X, Basis::G] {
            let group = CoefficientGroup::Free { rank, basis };
            let one = GroupRingElement::one(group);
            let lhs = GroupRingElement::monomial(group, GroupElem::Word(w.clone()), TPoly::one()).sub(&one).unwrap();
            let mut rhs = GroupRingElement::zero(group);
            for i in 1..=rank {
                let gi = GroupRingElement::monomial(group, GroupElem::Word(FreeWord::generator(rank, i).unwrap()), TPoly::one());
                let d = fox_derivative(&w, i, basis).unwrap();
                rhs = rhs.add(&d.mul(&gi.sub(&one).unwrap()).unwrap()).unwrap();
            }
            if lhs != rhs {
                return Err(format!("case {case}: {} in basis {basis:?}", w.render(basis)));
            }
        }
    }
    Ok(cases)
}

/// Multiplicativity of `det_ℤ` on injective 2×2 matrices.
pub fn det_multiplicative(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut done = 0;
    while done < cases {
        let a = random_z_matrix(&mut r, 2);
        let b = random_z_matrix(&mut r, 2);
        let da = det_integers(&a, 1.0, true).unwrap().value;
        let db = det_integers(&b, 1.0, true).unwrap().value;
        if da == 0.0 || db == 0.0 {
            continue;
        }
        let dab = det_integers(&a.compose(&b).unwrap(), 1.0, true).unwrap().value;
        if !rel_close(dab, da * db, 1e-9) {
            return Err(format!("det(AB) = {dab}, det A det B = {}", da * db));
        }
        done += 1;
    }
    Ok(cases)
}

/// `det [[A, C], [0, B]] = det A · det B` over `ℤ`.
pub fn det_block_triangular(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let (p, s) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let a = random_z_matrix(&mut r, p);
        let b = random_z_matrix(&mut r, s);
        let c = matrix(
            CoefficientGroup::Integers,
            (0..p).map(|_| (0..s).map(|_| random_z_elem(&mut r)).collect()).collect(),
        );
        let zero = GroupRingMatrix::zeros(CoefficientGroup::Integers, s, p);
        let m = GroupRingMatrix::block_assemble(&[vec![a.clone(), c], vec![zero, b.clone()]]).unwrap();
        let lhs = det_integers(&m, 1.0, true).unwrap().value;
        let rhs = det_integers(&a, 1.0, true).unwrap().value * det_integers(&b, 1.0, true).unwrap().value;
        if !rel_close(lhs, rhs, 1e-9) {
            return Err(format!("case {case}: {lhs} vs {rhs}"));
        }
    }
    Ok(cases)
}

/// An element of `ℤ[F_3]` supported on `⟨x_1⟩` has the same determinant as
/// its image in `ℤ[ℤ]`.
pub fn det_induction(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let b: i64 = r.gen_range(-3..=3);
        let c: i64 = r.gen_range(-2..=2);
        let lead = b.abs() + c.abs() + r.gen_range(1..=3);
        let a = if r.gen_bool(0.5) { lead } else { -lead };
        let free = free_elem(3, &[(vec![], a), (vec![1], b), (vec![1, 1], c)]);
        let image = z_elem(&[(0, a), (1, b), (2, c)]);
        let fm = matrix(free.group(), vec![vec![free]]);
        let zm = matrix(CoefficientGroup::Integers, vec![vec![image]]);
        let series = det_free_group(&fm, 1.0, 30, true).unwrap();
        let exact = det_integers(&zm, 1.0, true).unwrap().value;
        let err = series.error_bound.unwrap_or(0.0);
        if (series.value - exact).abs() > err + 1e-6 * exact {
            return Err(format!("case {case}: series {} ± {err} vs roots {exact}", series.value));
        }
    }
    Ok(cases)
}

/// `det [[A, B], [C, D]] = det(B) · det(D B⁻¹ A − C)` with `B` an invertible
/// monomial, over `ℤ`.
pub fn det_two_by_two(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let a = random_z_elem(&mut r);
        let c = random_z_elem(&mut r);
        let d = random_z_elem(&mut r);
        let coef = r.gen_range(1..=4) * if r.gen_bool(0.5) { 1 } else { -1 };
        let k = r.gen_range(-2..=2);
        let b = z_elem(&[(k, coef)]);
        let b_inv = GroupRingElement::monomial(
            CoefficientGroup::Integers,
            GroupElem::Lattice(vec![-k]),
            TPoly::constant(Rational::new(1.into(), coef.into())),
        );
        let m = matrix(CoefficientGroup::Integers, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
        let schur = d.mul(&b_inv).unwrap().mul(&a).unwrap().sub(&c).unwrap();
        let lhs = det_integers(&m, 1.0, true).unwrap().value;
        let rhs = coef.abs() as f64 * det_integers(&matrix(CoefficientGroup::Integers, vec![vec![schur]]), 1.0, true).unwrap().value;
        if !rel_close(lhs, rhs, 1e-9) {
            return Err(format!("case {case}: {lhs} vs {rhs}"));
        }
    }
    Ok(cases)
}

/// `det A = det A*` over `ℤ` (roots), `ℤ²` (quadrature) and `F_2` (series).
pub fn det_adjoint(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let a = random_z_matrix(&mut r, 2);
        let x = det_integers(&a, 1.0, true).unwrap().value;
        let y = det_integers(&a.adjoint(), 1.0, true).unwrap().value;
        if !rel_close(x, y, 1e-9) {
            return Err(format!("case {case} over Z: {x} vs {y}"));
        }
        if case % 10 == 0 {
            let terms: Vec<(Vec<i64>, i64)> =
                (0..3).map(|_| (vec![r.gen_range(-1..=1), r.gen_range(-1..=1)], r.gen_range(-2..=2))).collect();
            let e = lattice_elem(2, &terms);
            if !e.is_zero() {
                let m = matrix(e.group(), vec![vec![e]]);
                let x = det_free_abelian(&m, 1.0, 128).unwrap();
                let y = det_free_abelian(&m.adjoint(), 1.0, 128).unwrap();
                let tol = x.error_bound.unwrap_or(0.0) + y.error_bound.unwrap_or(0.0) + 1e-6;
                if (x.value - y.value).abs() > tol {
                    return Err(format!("case {case} over Z^2: {} vs {}", x.value, y.value));
                }
            }
            let b: i64 = r.gen_range(-2..=2);
            let c: i64 = r.gen_range(-2..=2);
            let lead = 1 + b.abs() + c.abs() + r.gen_range(0..=2);
            let f = free_elem(2, &[(vec![], lead), (vec![1], b), (vec![2, -1], c)]);
            let m = matrix(f.group(), vec![vec![f]]);
            let x = det_free_group(&m, 1.0, 30, true).unwrap();
            let y = det_free_group(&m.adjoint(), 1.0, 30, true).unwrap();
            let tol = x.error_bound.unwrap_or(0.0) + y.error_bound.unwrap_or(0.0) + 1e-6;
            if (x.value - y.value).abs() > tol {
                return Err(format!("case {case} over F2: {} vs {}", x.value, y.value));
            }
        }
    }
    Ok(cases)
}

/// `det(λ · Id^{⊕n}) = |λ|^n` over `ℤ`, `ℤ²` and `F_2`.
pub fn det_dilation(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for case in 0..cases {
        let lam: i64 = r.gen_range(1..=5) * if r.gen_bool(0.5) { 1 } else { -1 };
        let n = r.gen_range(1..=3);
        let expect = (lam.abs() as f64).powi(n as i32);
        let c = TPoly::from_int(lam);
        for group in [CoefficientGroup::Integers, CoefficientGroup::FreeAbelian(2), CoefficientGroup::Free { rank: 2, basis: Basis::X }] {
            let m = GroupRingMatrix::identity(group, n).scale(&c);
            let v = match group {
                CoefficientGroup::Integers => det_integers(&m, 1.0, true).unwrap().value,
                CoefficientGroup::FreeAbelian(_) => det_free_abelian(&m, 1.0, 64).unwrap().value,
                CoefficientGroup::Free { .. } => det_free_group(&m, 1.0, 8, true).unwrap().value,
            };
            if !rel_close(v, expect, 1e-9) {
                return Err(format!("case {case} over {}: {v} vs {expect}", group.name()));
            }
        }
    }
    Ok(cases)
}

/// `B_γ(αβ) = B_γ(α) ∘ B_{γ∘h_α}(β)` under the identity family.
pub fn anti_multiplicativity(per_n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for n in 2..=4 {
        let q = EpiFamily::Identity.epimorphism(n).unwrap();
        for case in 0..per_n {
            let a = random_braid(&mut r, n, 5);
            let b = random_braid(&mut r, n, 5);
            let lhs = reduced_burau_with(&a.compose(&b).unwrap(), &q).unwrap();
            let twisted = q.precompose(&artin_automorphism(&a, Basis::G));
            let rhs = reduced_burau_with(&a, &q).unwrap().compose(&reduced_burau_with(&b, &twisted).unwrap()).unwrap();
            if lhs != rhs {
                return Err(format!("n={n} case {case}: α = {a}, β = {b}"));
            }
        }
    }
    Ok(3 * per_n)
}

/// Direct Fox-jacobian route and generator-composition route coincide.
pub fn routes_agree(per_n: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let families = [EpiFamily::Identity, EpiFamily::TotalWinding, EpiFamily::Abelianization];
    for n in 2..=4 {
        for case in 0..per_n {
            let b = random_braid(&mut r, n, 6);
            let fam = &families[case % 3];
            let direct = reduced_burau(&b, fam).unwrap().matrix;
            let composed = reduced_burau_composed(&b, fam).unwrap().matrix;
            if direct != composed {
                return Err(format!("n={n} {}: β = {b}", fam.tag()));
            }
        }
    }
    Ok(3 * per_n)
}

/// The stabilization block reduction on random `(β, ε)`.
pub fn block_triangularization(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let ts = [0.5, 1.0, 2.0];
    for case in 0..cases {
        let n = r.gen_range(1..=3);
        let b = random_braid(&mut r, n, 6);
        let eps = if r.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
        let t0 = ts[r.gen_range(0..3)];
        let report = verify_block_triangularization(&b, eps, t0).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!("case {case}: β = {b}, ε = {eps:?}, t = {t0}: {report:?}"));
        }
    }
    Ok(cases)
}

/// Both Markov squares commute for every family on random `(β, α, ε)`.
pub fn admissibility(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let families = [EpiFamily::Identity, EpiFamily::TotalWinding, EpiFamily::Abelianization];
    for case in 0..cases {
        let n = r.gen_range(2..=5);
        let b = random_braid(&mut r, n, 8);
        let a = random_braid(&mut r, n, 4);
        let eps = if r.gen_bool(0.5) { Sign::Positive } else { Sign::Negative };
        let fam = &families[case % 3];
        let report = fam.check_admissibility(&b, &a, eps);
        if !report.passed() {
            return Err(format!("case {case} {}: {report:?}", fam.tag()));
        }
    }
    Ok(cases)
}

/// Every generator matrix under the total winding has determinant `t^{±1}`.
pub fn generator_determinants(max_n: usize) -> Outcome {
    let mut count = 0;
    for n in 2..=max_n {
        let fam = EpiFamily::TotalWinding;
        for i in 1..n {
            for sign in [Sign::Positive, Sign::Negative] {
                let m = l2burau_core::torsion::generator_matrix(n, i, sign, &fam).unwrap();
                for t0 in [0.5f64, 1.0, 2.0] {
                    let v = det_integers(&m.matrix, t0, true).unwrap().value;
                    let expect = t0.powi(sign.value());
                    if (v - expect).abs() > 1e-9 {
                        return Err(format!("σ_{i}^{} on {n} strands at t = {t0}: {v}", sign.value()));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}
