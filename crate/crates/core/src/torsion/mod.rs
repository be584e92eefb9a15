//! Reduced and unreduced L²-Burau matrices, the function `F_Q`, Alexander
//! polynomials of braid closures and Markov-move experiments.

mod checks;
mod markov;

use alloc::vec::Vec;

#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use num_traits::One;

use crate::braid::{BraidWord, Sign};
use crate::epi::{EpiFamily, Epimorphism};
use crate::error::{Error, Result};
use crate::fkdet::{self, DetOptions, FkEstimate};
use crate::freegroup::{artin_automorphism, artin_generator, fox_jacobian, Basis};
use crate::groupring::{GroupElem, GroupRingMatrix};
use crate::poly::{determinant, LaurentPoly};
use crate::Rational;

pub use checks::{conjugation_identity_check, verify_block_triangularization, BlockReport, ConjugationReport};
pub use markov::{fit_monomial, markov_report, MarkovMove, MarkovReport, Stage, Verdict};

/// A Burau matrix together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct BurauMatrix {
    pub matrix: GroupRingMatrix,
    pub family: EpiFamily,
    pub braid: BraidWord,
    /// `G` for reduced matrices, `X` for unreduced ones.
    pub basis: Basis,
}

impl BurauMatrix {
    fn new(matrix: GroupRingMatrix, family: &EpiFamily, braid: &BraidWord, basis: Basis) -> Result<Self> {
        let out = BurauMatrix { matrix, family: family.clone(), braid: braid.clone(), basis };
        if family == &EpiFamily::TotalWinding && !out.kappa_consistent() {
            return Err(Error::InvalidParameter("t-exponents do not match the winding of the group element".into()));
        }
        Ok(out)
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    /// Under the total winding every term is `c·t^k z^k`.
    pub fn kappa_consistent(&self) -> bool {
        self.matrix.entries().iter().all(|e| {
            e.terms().all(|(g, c)| match g {
                GroupElem::Lattice(v) if v.len() == 1 => c.terms().all(|(k, _)| k == v[0]),
                _ => false,
            })
        })
    }

    /// `B − Id`.
    pub fn minus_identity(&self) -> GroupRingMatrix {
        let id = GroupRingMatrix::identity(self.matrix.group(), self.size());
        self.matrix.sub(&id).expect("same shape and group")
    }
}

fn kappa_matrix(jac: &[Vec<crate::groupring::GroupRingElement>], q: &Epimorphism, size: usize) -> Result<GroupRingMatrix> {
    let rows = jac[..size]
        .iter()
        .map(|row| row[..size].iter().map(|e| q.kappa_element(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    if size == 0 {
        return Ok(GroupRingMatrix::zeros(q.target(), 0, 0));
    }
    GroupRingMatrix::from_rows(q.target(), rows)
}

/// Reduced matrix of `σ_i^sign` on `n` strands with entries pushed through
/// `κ(t, Φ_n, q)`.
pub fn generator_matrix_with(n: usize, i: usize, sign: Sign, q: &Epimorphism) -> Result<GroupRingMatrix> {
    if q.source_rank() != n {
        return Err(Error::RankMismatch { expected: n, found: q.source_rank() });
    }
    let aut = artin_generator(n, sign.value() * i as i32, Basis::G)?;
    kappa_matrix(&fox_jacobian(&aut), q, n - 1)
}

pub fn generator_matrix(n: usize, i: usize, sign: Sign, family: &EpiFamily) -> Result<BurauMatrix> {
    let braid = BraidWord::generator(n, i, sign)?;
    let q = family.epimorphism(n)?;
    BurauMatrix::new(generator_matrix_with(n, i, sign, &q)?, family, &braid, Basis::G)
}

/// Reduced matrix of `β` for an arbitrary epimorphism, from the Fox jacobian
/// of `h_β` in the `g`-basis.
pub fn reduced_burau_with(beta: &BraidWord, q: &Epimorphism) -> Result<GroupRingMatrix> {
    let n = beta.strands();
    if q.source_rank() != n {
        return Err(Error::RankMismatch { expected: n, found: q.source_rank() });
    }
    let aut = artin_automorphism(beta, Basis::G);
    kappa_matrix(&fox_jacobian(&aut), q, n - 1)
}

pub fn reduced_burau(beta: &BraidWord, family: &EpiFamily) -> Result<BurauMatrix> {
    let q = family.epimorphism(beta.strands())?;
    BurauMatrix::new(reduced_burau_with(beta, &q)?, family, beta, Basis::G)
}

/// Same matrix as [`reduced_burau_with`], built as the product of generator
/// matrices `B_q(l_1) ∘ B_{q∘h_{l_1}}(l_2) ∘ …`.
pub fn reduced_burau_composed_with(beta: &BraidWord, q: &Epimorphism) -> Result<GroupRingMatrix> {
    let n = beta.strands();
    if q.source_rank() != n {
        return Err(Error::RankMismatch { expected: n, found: q.source_rank() });
    }
    let mut acc = GroupRingMatrix::identity(q.target(), n - 1);
    let mut cur = q.clone();
    for &l in beta.letters() {
        let sign = if l > 0 { Sign::Positive } else { Sign::Negative };
        let step = generator_matrix_with(n, l.unsigned_abs() as usize, sign, &cur)?;
        acc = acc.compose(&step)?;
        cur = cur.precompose(&artin_generator(n, l, Basis::G)?);
    }
    Ok(acc)
}

pub fn reduced_burau_composed(beta: &BraidWord, family: &EpiFamily) -> Result<BurauMatrix> {
    let q = family.epimorphism(beta.strands())?;
    BurauMatrix::new(reduced_burau_composed_with(beta, &q)?, family, beta, Basis::G)
}

/// `n × n` matrix from the Fox jacobian of `h_β` in the `x`-basis.
pub fn unreduced_burau(beta: &BraidWord, family: &EpiFamily) -> Result<BurauMatrix> {
    let n = beta.strands();
    let q = family.epimorphism(n)?;
    let aut = artin_automorphism(beta, Basis::X);
    BurauMatrix::new(kappa_matrix(&fox_jacobian(&aut), &q, n)?, family, beta, Basis::X)
}

/// A value of `F_Q(β)(t0) = det^r(B − Id)/max(1, t0)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FqValue {
    pub braid: BraidWord,
    pub family: EpiFamily,
    pub t0: f64,
    pub value: f64,
    pub error_bound: Option<f64>,
    /// `max(1, t0)^n`, already divided out.
    pub normalization: f64,
    pub estimate: FkEstimate,
}

pub fn fq_value(beta: &BraidWord, family: &EpiFamily, t0: f64, opts: &DetOptions) -> Result<FqValue> {
    let b = reduced_burau(beta, family)?;
    let est = fkdet::determinant(&b.minus_identity(), t0, opts)?;
    let normalization = t0.max(1.0).powi(beta.strands() as i32);
    Ok(FqValue {
        braid: beta.clone(),
        family: family.clone(),
        t0,
        value: est.value / normalization,
        error_bound: est.error_bound.map(|e| e / normalization),
        normalization,
        estimate: est,
    })
}

/// Rewrites a total-winding matrix in the single variable `s = t·z`.
fn in_s(m: &GroupRingMatrix) -> Vec<Vec<LaurentPoly>> {
    m.row_vecs()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    let mut p = LaurentPoly::zero();
                    for (_, c) in e.terms() {
                        for (k, v) in c.terms() {
                            p.add_term(k, v.clone());
                        }
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// `det(B − Id)` of the reduced total-winding matrix as a polynomial in `s = t·z`.
pub fn burau_polynomial(beta: &BraidWord) -> Result<LaurentPoly> {
    let b = reduced_burau(beta, &EpiFamily::TotalWinding)?;
    Ok(determinant(&in_s(&b.minus_identity())))
}

/// Alexander polynomial of a knot closure in `s`, with lowest degree `0` and
/// positive leading coefficient.
pub fn alexander_polynomial(beta: &BraidWord) -> Result<LaurentPoly> {
    let comps = beta.closure_components();
    if comps != 1 {
        return Err(Error::NotAKnot(comps));
    }
    let d = burau_polynomial(beta)?;
    let n = beta.strands() as i64;
    let geometric = LaurentPoly::from_terms((0..n).map(|k| (k, Rational::one())));
    let q = d.div_exact(&geometric).ok_or(Error::InexactDivision)?;
    Ok(q.normalize_units())
}

/// `M(Δ(t0·z)) / max(1, t0)`, the value `F_Φ` takes on a knot closure.
pub fn alexander_mahler(beta: &BraidWord, t0: f64) -> Result<f64> {
    let delta = alexander_polynomial(beta)?;
    let t = fkdet::rational_t(t0)?;
    let mut p = LaurentPoly::zero();
    for (k, c) in delta.terms() {
        p.add_term(k, c * crate::poly::rational_pow(&t, k));
    }
    let (m, _) = fkdet::mahler_measure(&p);
    Ok(m / t0.max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::freegroup::FreeWord;
    use crate::groupring::{CoefficientGroup, GroupRingElement};
    use crate::poly::TPoly;

    fn braid(s: &str, n: usize) -> BraidWord {
        parse_braid(s, Some(n)).unwrap()
    }

    fn gword(n: usize, l: &[i32]) -> GroupElem {
        GroupElem::Word(FreeWord::from_letters(n, l).unwrap())
    }

    fn free_term(n: usize, l: &[i32], c: TPoly) -> GroupRingElement {
        GroupRingElement::monomial(CoefficientGroup::Free { rank: n, basis: Basis::G }, gword(n, l), c)
    }

    #[test]
    fn generator_examples() {
        let b = generator_matrix(2, 1, Sign::Positive, &EpiFamily::TotalWinding).unwrap();
        assert_eq!(b.matrix.to_string().trim_end(), "[(-1)t^1 [z]]");
        let b = generator_matrix(2, 1, Sign::Negative, &EpiFamily::Identity).unwrap();
        assert_eq!(*b.matrix.get(0, 0), free_term(2, &[-1], TPoly::monomial(Rational::from_integer((-1).into()), -1)));
        for t0 in [0.5, 1.0, 2.0] {
            let b = generator_matrix(4, 2, Sign::Positive, &EpiFamily::TotalWinding).unwrap();
            let est = fkdet::det_integers(&b.matrix, t0, true).unwrap();
            assert!((est.value - t0).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_table() {
        // σ_i and σ_i⁻¹ for 1 < i < n−1 against the explicit table
        let n = 5;
        let q = EpiFamily::Identity.epimorphism(n).unwrap();
        let i = 2;
        let t = |k: i64, c: i64| TPoly::monomial(Rational::from_integer(c.into()), k);
        let m = generator_matrix_with(n, i, Sign::Positive, &q).unwrap();
        let ii = i as i32;
        assert_eq!(*m.get(i - 2, i - 1), free_term(n, &[ii + 1, -ii], t(1, 1)));
        assert_eq!(*m.get(i - 1, i - 1), free_term(n, &[ii + 1, -ii], t(1, -1)));
        assert_eq!(*m.get(i, i - 1), free_term(n, &[], t(0, 1)));
        let m = generator_matrix_with(n, i, Sign::Negative, &q).unwrap();
        assert_eq!(*m.get(i - 2, i - 1), free_term(n, &[], t(0, 1)));
        assert_eq!(*m.get(i - 1, i - 1), free_term(n, &[ii - 1, -ii], t(-1, -1)));
        assert_eq!(*m.get(i, i - 1), free_term(n, &[ii - 1, -ii], t(-1, 1)));
        for j in 0..n - 1 {
            if j != i - 1 {
                assert_eq!(*m.get(j, j), free_term(n, &[], t(0, 1)));
            }
        }
    }

    #[test]
    fn counterexample_matrix() {
        let b = reduced_burau(&braid("-1 2", 3), &EpiFamily::Identity).unwrap();
        let t = |k: i64, c: i64| TPoly::monomial(Rational::from_integer(c.into()), k);
        assert_eq!(*b.matrix.get(0, 0), free_term(3, &[-1], t(-1, -1)));
        assert_eq!(*b.matrix.get(0, 1), free_term(3, &[3, -2, -1], t(0, -1)));
        assert_eq!(*b.matrix.get(1, 0), free_term(3, &[-1], t(-1, 1)));
        let expected = free_term(3, &[3, -2], t(1, -1)).add(&free_term(3, &[3, -2, -1], t(0, 1))).unwrap();
        assert_eq!(*b.matrix.get(1, 1), expected);
    }

    #[test]
    fn routes_agree() {
        for fam in [EpiFamily::Identity, EpiFamily::TotalWinding, EpiFamily::Abelianization] {
            for w in ["1 -2 1 3 -1", "-3 -3 2 1 2", ""] {
                let b = braid(w, 4);
                assert_eq!(reduced_burau(&b, &fam).unwrap().matrix, reduced_burau_composed(&b, &fam).unwrap().matrix, "{w}");
            }
        }
    }

    #[test]
    fn trivial_and_cube() {
        let b = reduced_burau(&BraidWord::identity(3), &EpiFamily::Identity).unwrap();
        assert_eq!(b.matrix, GroupRingMatrix::identity(b.matrix.group(), 2));
        let b = reduced_burau(&braid("1 1 1", 2), &EpiFamily::TotalWinding).unwrap();
        assert_eq!(b.matrix.to_string().trim_end(), "[(-1)t^3 [z^3]]");
        let u = unreduced_burau(&braid("1", 2), &EpiFamily::TotalWinding).unwrap();
        assert_eq!(u.size(), 2);
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_polynomial(&braid("1 1 1", 2)).unwrap().display_with("s"), "s^2 - s + 1");
        assert_eq!(alexander_polynomial(&braid("1", 2)).unwrap().display_with("s"), "1");
        assert_eq!(alexander_polynomial(&braid("1 -2 1 -2", 3)).unwrap().display_with("s"), "s^2 - 3 s + 1");
        assert_eq!(alexander_polynomial(&braid("1 1", 2)), Err(Error::NotAKnot(2)));
    }

    #[test]
    fn fq_examples() {
        let opts = DetOptions::default();
        let v = fq_value(&braid("-1", 2), &EpiFamily::Abelianization, 1.0, &opts).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        let v = fq_value(&braid("1 -2 1 -2", 3), &EpiFamily::TotalWinding, 1.0, &opts).unwrap();
        assert!((v.value - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        // equal up to a monomial t^m
        let b = braid("1 -2 1 -2", 3);
        let ts = [0.5, 1.0, 2.0];
        let f: Vec<f64> = ts.iter().map(|&t| fq_value(&b, &EpiFamily::TotalWinding, t, &opts).unwrap().value).collect();
        let g: Vec<f64> = ts.iter().map(|&t| alexander_mahler(&b, t).unwrap()).collect();
        let (m, resid) = fit_monomial(&ts, &f, &g);
        assert_eq!(m, -2);
        assert!(resid < 1e-9);
    }
}
