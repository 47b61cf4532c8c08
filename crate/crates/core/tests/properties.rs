use std::sync::Arc;

use contlogic::coding::{decode, encode};
use contlogic::eval::{eval, eval_exact, EvalBudget, TestStructure};
use contlogic::formula::{prenex, random_formula, RandomFormulaConfig, Signature};
use contlogic::group::{moments, GroupAlgebraElement, GroupSpec};
use contlogic::matrix::GaussMatrix;
use contlogic::numeric::{binomial, biguint_to_q, q, GaussQ, Q};
use contlogic::presentation::{CstarLambdaPresentation, NormReport, Presentation};
use contlogic::selftest::{central_binomials, tree_closed_walks};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn prenex_preserves_exact_values_up_to_depth_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sig = Signature::metric();
    let cfg = RandomFormulaConfig::new(6).sentences();
    for _ in 0..300 {
        let t = TestStructure::random(&mut rng, 4);
        let phi = random_formula(&mut rng, &sig, &cfg);
        let p = prenex(&phi);
        assert_eq!(eval_exact(&phi, &t).unwrap(), eval_exact(&p, &t).unwrap(), "{phi:?}");
    }
}

#[test]
fn full_budget_on_finite_structures_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let sig = Signature::metric();
    let cfg = RandomFormulaConfig::new(3).sentences();
    for _ in 0..100 {
        let t = TestStructure::random(&mut rng, 5);
        let phi = random_formula(&mut rng, &sig, &cfg);
        let exact = eval_exact(&phi, &t).unwrap();
        let r = eval(&phi, &t, &EvalBudget::new(t.len() as u64, 16)).unwrap();
        let (lo, hi) = (r.certified_lower.unwrap(), r.certified_upper.unwrap());
        assert!(lo <= exact && exact <= hi);
    }
}

#[test]
fn codes_round_trip_in_every_preset() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for sig in [Signature::metric(), Signature::cstar(), Signature::tvna()] {
        for _ in 0..100 {
            let phi = random_formula(&mut rng, &sig, &RandomFormulaConfig::new(6));
            assert_eq!(decode(&encode(&phi, &sig).unwrap(), &sig).unwrap(), phi);
        }
    }
}

#[test]
fn oracles_agree_with_closed_forms() {
    let c = central_binomials(12);
    for n in 0..=12u64 {
        assert_eq!(c[n as usize], binomial(2 * n, n));
    }
    // the 2-regular tree is the integer line
    assert_eq!(tree_closed_walks(2, 12), c);
    assert_eq!(tree_closed_walks(4, 3).iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["1", "4", "28", "232"]);
}

#[test]
fn z2_moments_are_squared_central_binomials() {
    let spec = Arc::new(GroupSpec::free_abelian(&["u", "v"]));
    let a = GroupAlgebraElement::parse(&spec, "u + u^-1 + v + v^-1").unwrap();
    let m = moments(&a, 12).unwrap();
    let c = central_binomials(12);
    for n in 0..=12 {
        assert_eq!(m[n], biguint_to_q(&(&c[n] * &c[n])));
    }
}

#[test]
fn finite_group_norms_are_two_sided() {
    // a + a^-1 in C[Z/3] has spectrum {2, -1, -1}
    let p = CstarLambdaPresentation::new(GroupSpec::cyclic(3));
    let a = GroupAlgebraElement::parse(p.spec(), "a + a^-1").unwrap();
    match p.norm(&a, 12, 0) {
        NormReport::TwoSided { lo, hi } => assert!(lo <= q(2, 1) && q(2, 1) <= hi && &hi - &lo <= q(1, 4096)),
        other => panic!("expected two sided, got {other:?}"),
    }
}

#[test]
fn diagonal_matrices_have_exact_norm_bounds() {
    let d = GaussMatrix::diag(&[GaussQ::real(q(1, 2)), GaussQ::real(q(-3, 4)), GaussQ::new(q(0, 1), q(1, 4))]);
    let ups = d.opnorm_upper_sweep(8, 30);
    assert!(ups.windows(2).all(|w| w[1] <= w[0]));
    assert!(ups[8] >= q(3, 4));
    // tr(H^(2^8))^(1/2^9) <= 3^(1/512) * 3/4
    assert!(ups[8] <= q(3, 4) * q(1003, 1000));
    let two = d.two_norm(20);
    let exact_sq: Q = (q(1, 4) + q(9, 16) + q(1, 16)) / q(3, 1);
    assert!(&two.lo * &two.lo <= exact_sq && exact_sq <= &two.hi * &two.hi);
}
