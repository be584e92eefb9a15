mod common;

use l2burau_core::fkdet::det_integers;
use l2burau_core::freegroup::{artin_automorphism, fox_derivative};
use l2burau_core::torsion::{
    conjugation_identity_check, fq_value, reduced_burau, reduced_burau_composed, reduced_burau_with,
    verify_block_triangularization,
};
use l2burau_core::{
    parse_braid, Basis, BraidWord, CoefficientGroup, DetOptions, EpiFamily, FreeWord, GroupElem, GroupRingElement, Sign,
    TPoly,
};
use proptest::prelude::*;

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let r = rank as i32;
    prop::collection::vec((1..=r, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
}

fn braid(n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    letters(n - 1, max_len).prop_map(move |l| BraidWord::new(n, l).unwrap())
}

fn sign() -> impl Strategy<Value = Sign> {
    any::<bool>().prop_map(|b| if b { Sign::Positive } else { Sign::Negative })
}

fn family() -> impl Strategy<Value = EpiFamily> {
    prop_oneof![Just(EpiFamily::Identity), Just(EpiFamily::TotalWinding), Just(EpiFamily::Abelianization)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fox_fundamental_formula(rank in 1usize..=4, seed in letters(4, 20)) {
        let l: Vec<i32> = seed.into_iter().filter(|x| x.unsigned_abs() as usize <= rank).collect();
        let w = FreeWord::from_letters(rank, &l).unwrap();
        let group = CoefficientGroup::Free { rank, basis: Basis::X };
        let one = GroupRingElement::one(group);
        let lhs = GroupRingElement::monomial(group, GroupElem::Word(w.clone()), TPoly::one()).sub(&one).unwrap();
        let mut rhs = GroupRingElement::zero(group);
        for i in 1..=rank {
            let x = GroupRingElement::monomial(group, GroupElem::Word(FreeWord::generator(rank, i).unwrap()), TPoly::one());
            rhs = rhs.add(&fox_derivative(&w, i, Basis::X).unwrap().mul(&x.sub(&one).unwrap()).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn anti_multiplicative(n in 2usize..=4, la in letters(3, 5), lb in letters(3, 5)) {
        let clip = |l: Vec<i32>| -> Vec<i32> { l.into_iter().filter(|x| (x.unsigned_abs() as usize) < n).collect() };
        let a = BraidWord::new(n, clip(la)).unwrap();
        let b = BraidWord::new(n, clip(lb)).unwrap();
        let q = EpiFamily::Identity.epimorphism(n).unwrap();
        let twisted = q.precompose(&artin_automorphism(&a, Basis::G));
        let lhs = reduced_burau_with(&a.compose(&b).unwrap(), &q).unwrap();
        let rhs = reduced_burau_with(&a, &q).unwrap().compose(&reduced_burau_with(&b, &twisted).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn construction_routes_agree(b in braid(4, 6), fam in family()) {
        prop_assert_eq!(reduced_burau(&b, &fam).unwrap().matrix, reduced_burau_composed(&b, &fam).unwrap().matrix);
    }

    #[test]
    fn markov_squares_commute(b in braid(4, 8), a in braid(4, 4), eps in sign(), fam in family()) {
        let report = fam.check_admissibility(&b, &a, eps);
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn conjugation_factorizes(b in braid(3, 5), a in braid(3, 3), fam in family()) {
        prop_assert!(conjugation_identity_check(&b, &a, &fam).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stabilization_blocks(b in braid(3, 6), eps in sign(), t_idx in 0usize..3) {
        let t0 = [0.5, 1.0, 2.0][t_idx];
        let r = verify_block_triangularization(&b, eps, t0).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn winding_value_is_conjugation_invariant(b in braid(3, 6), a in braid(3, 3)) {
        let opts = DetOptions::default();
        let c = b.conjugate(&a).unwrap();
        for t0 in [0.5, 1.0, 2.0] {
            let x = fq_value(&b, &EpiFamily::TotalWinding, t0, &opts).unwrap().value;
            let y = fq_value(&c, &EpiFamily::TotalWinding, t0, &opts).unwrap().value;
            prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0), "{} vs {} at {}", x, y, t0);
        }
    }
}

#[test]
fn deterministic_suites() {
    assert_eq!(common::fox_fundamental(200, 1), Ok(200));
    assert_eq!(common::det_multiplicative(40, 2), Ok(40));
    assert_eq!(common::det_block_triangular(40, 3), Ok(40));
    assert_eq!(common::det_induction(10, 4), Ok(10));
    assert_eq!(common::det_two_by_two(40, 5), Ok(40));
    assert_eq!(common::det_adjoint(20, 6), Ok(20));
    assert_eq!(common::det_dilation(10, 7), Ok(10));
    assert_eq!(common::generator_determinants(5), Ok(60));
}

#[test]
fn unit_generator_determinant_is_t() {
    let b = parse_braid("2", Some(4)).unwrap();
    let m = reduced_burau(&b, &EpiFamily::TotalWinding).unwrap();
    assert!((det_integers(&m.matrix, 2.0, true).unwrap().value - 2.0).abs() < 1e-12);
}

#[test]
fn winding_value_matches_alexander_mahler() {
    use l2burau_core::torsion::{alexander_mahler, fit_monomial};
    use rand::Rng;
    let mut r = common::rng(41);
    let opts = DetOptions::default();
    let ts = [0.5, 1.0, 2.0];
    for _ in 0..30 {
        let n = r.gen_range(2..=4);
        let b = common::random_knot_braid(&mut r, n, 8);
        let f: Vec<f64> = ts.iter().map(|&t| fq_value(&b, &EpiFamily::TotalWinding, t, &opts).unwrap().value).collect();
        let g: Vec<f64> = ts.iter().map(|&t| alexander_mahler(&b, t).unwrap()).collect();
        assert!((f[1] - g[1]).abs() <= 1e-6, "{b}: {f:?} vs {g:?}");
        let (_, resid) = fit_monomial(&ts, &f, &g);
        assert!(resid <= 1e-6, "{b}: {f:?} vs {g:?}");
    }
}
