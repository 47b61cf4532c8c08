use super::*;
use crate::coding::encode;
use crate::formula::{random_prenex_sentence, RandomFormulaConfig};
use crate::group::{GroupAlgebraElement, GroupSpec};
use crate::numeric::{pow2_neg, q};
use crate::parser::parse_formula;
use crate::presentation::{C2wPresentation, GroupVnaPresentation, LocallyConstant, Presentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn metric(text: &str) -> Formula {
    parse_formula(text, &Signature::metric()).unwrap()
}

#[test]
fn quantifier_free_examples() {
    let t = TestStructure::uniform(2, q(1, 2)).unwrap();
    assert_eq!(eval_qf(&metric("1"), &t, 5).unwrap(), Interval::point(Q::one()));
    let v = eval_qf(&metric("half(d(c1, c2))"), &t, 5).unwrap();
    assert_eq!(v, Interval::point(q(1, 4)));
    assert_eq!(eval_exact(&metric("half(d(c1, c2))"), &t).unwrap(), q(1, 4));
}

#[test]
fn reflexive_distance_on_matrices() {
    let s = PresentationStructure::new(crate::presentation::RPresentation::new()).bind(1, 17);
    let sig = Signature::tvna();
    let v = eval_qf(&parse_formula("d(c1, c1)", &sig).unwrap(), &s, 10).unwrap();
    assert_eq!(v.lo, Q::zero());
    assert!(v.hi <= pow2_neg(9));
    let unbound = eval_qf(&parse_formula("d(c2, c1)", &sig).unwrap(), &s, 10);
    assert_eq!(unbound, Err(EvalError::UnboundConstant(2)));
}

#[test]
fn exact_examples() {
    let t = TestStructure::uniform(2, q(1, 2)).unwrap();
    assert_eq!(eval_exact(&metric("sup x. d(x, x)"), &t).unwrap(), Q::zero());
    assert_eq!(eval_exact(&metric("sup x. inf y. d(x, y)"), &t).unwrap(), Q::zero());
    let line = TestStructure::line(&[Q::zero(), q(1, 2), Q::one()]).unwrap().bind(1, 0);
    let short = eval(&metric("sup x. d(x, c1)"), &line, &EvalBudget::new(1, 10)).unwrap();
    assert_eq!((short.certified_lower, short.certified_upper), (Some(Q::zero()), None));
    let r = eval(&metric("sup x. d(x, c1)"), &line, &EvalBudget::new(3, 10)).unwrap();
    assert_eq!(r.certified_lower, Some(Q::one()));
    assert_eq!(r.certified_upper, Some(Q::one()));
    assert_eq!(r.witnesses[0].point, 2);
    assert_eq!(eval_exact(&metric("sup x. d(x, c1)"), &line).unwrap(), Q::one());
}

#[test]
fn inf_of_constant_one() {
    let s = PresentationStructure::new(C2wPresentation::new());
    let sig = Signature::cstar();
    let phi = parse_formula("inf x. 1 -. d(x, x)", &sig).unwrap();
    let r = eval(&phi, &s, &EvalBudget::new(16, 10)).unwrap();
    assert_eq!(r.certified_lower, None);
    let u = r.certified_upper.unwrap();
    assert!(u >= Q::one() && u <= Q::one() + pow2_neg(10));
    assert_eq!(r.estimate, Q::one().min(u));
}

#[test]
fn projection_sentence_on_cantor_space() {
    let s = PresentationStructure::new(C2wPresentation::new());
    let sig = Signature::cstar();
    let part = |t: &str| parse_formula(t, &sig).unwrap();
    let body = Formula::max(
        part("d(mul(x, adj(x)), x)"),
        Formula::max(part("half(1) -. d(x, comb(0, one, 0, one))"), part("half(1) -. d(x, one)")),
    );
    let phi = Formula::inf("x", body);
    let r = eval(&phi, &s, &EvalBudget::new(40, 10)).unwrap();
    let u = r.certified_upper.unwrap();
    assert!(u <= pow2_neg(10));
    // the witness is a nontrivial projection
    let w = s.point(r.witnesses[0].point).unwrap();
    let c = C2wPresentation::new();
    assert_eq!(c.mul(&w, &c.adjoint(&w)).unwrap(), w);
    assert!(w.values.iter().any(|v| v.is_zero()) && w.values.iter().any(|v| !v.is_zero()));
    assert_ne!(w, LocallyConstant::constant(GaussQ::one()));
}

#[test]
fn trace_sentence_on_group_vna() {
    let p = GroupVnaPresentation::new(GroupSpec::integers());
    let s = PresentationStructure::new(p);
    let phi = parse_formula("sup x. tr_re(x)", &Signature::tvna()).unwrap();
    let r = eval(&phi, &s, &EvalBudget::new(8, 10)).unwrap();
    assert!(r.certified_lower.unwrap() >= Q::one() - pow2_neg(10));
    let w = s.point(r.witnesses[0].point).unwrap();
    assert_eq!(w, GroupAlgebraElement::identity(s.presentation.spec()));
}

#[test]
fn soundness_against_exact_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sig = Signature::metric();
    let cfg = RandomFormulaConfig::new(2).sentences();
    for _ in 0..200 {
        let t = TestStructure::random(&mut rng, 6);
        let phi = random_prenex_sentence(&mut rng, &sig, &cfg, 2, 2);
        let exact_value = eval_exact(&phi, &t).unwrap();
        assert_eq!(eval_exact(&prenex(&phi), &t).unwrap(), exact_value);
        let r = eval(&phi, &t, &EvalBudget::new(1, 12)).unwrap();
        assert!(r.certified_lower.as_ref().map_or(true, |l| *l <= exact_value), "{phi:?}");
        assert!(r.certified_upper.as_ref().map_or(true, |u| exact_value <= *u), "{phi:?}");
    }
}

#[test]
fn budget_monotonicity_and_witnesses() {
    let s = PresentationStructure::new(C2wPresentation::new());
    let sig = Signature::cstar();
    let sup_phi = parse_formula("sup x. d(x, one)", &sig).unwrap();
    let inf_phi = parse_formula("inf x. 1 -. d(x, comb(0, one, 0, one))", &sig).unwrap();
    let mut prev_lower = Q::zero();
    let mut prev_upper = Q::one();
    for n in [1u64, 4, 16, 64] {
        let b = EvalBudget::new(n, 10);
        let r = eval(&sup_phi, &s, &b).unwrap();
        let l = r.certified_lower.clone().unwrap();
        assert!(l >= prev_lower);
        prev_lower = l.clone();
        let pinned = eval_pinned(&sup_phi, &s, 10, &[r.witnesses[0].point]).unwrap();
        assert_eq!(pinned.certified_lower, Some(l));
        let r = eval(&inf_phi, &s, &b).unwrap();
        let u = r.certified_upper.clone().unwrap();
        assert!(u <= prev_upper);
        prev_upper = u;
    }
    assert!(prev_lower >= q(1, 2));
}

#[test]
fn deterministic_under_parallel_search() {
    let s = PresentationStructure::new(C2wPresentation::new());
    let phi = parse_formula("sup x. inf y. d(mul(x, y), y)", &Signature::cstar()).unwrap();
    let b = EvalBudget::new(24, 8);
    let a = eval(&phi, &s, &b).unwrap();
    for _ in 0..3 {
        assert_eq!(eval(&phi, &s, &b).unwrap(), a);
    }
}

#[test]
fn classification_labels() {
    let sig = Signature::metric();
    let forall2 = metric("sup x. inf y. d(x, y)");
    let forall4 = metric("sup x. inf y. sup z. inf w. d(x, y) -. d(z, w)");
    let c2 = encode(&forall2, &sig).unwrap();
    let c4 = encode(&forall4, &sig).unwrap();
    assert_eq!(classify(&c2, &sig, Relation::Le, 1).unwrap(), "Π_1^d");
    assert_eq!(classify(&c2, &sig, Relation::Gt, 1).unwrap(), "Σ_1^d");
    assert_eq!(classify(&c2, &sig, Relation::Lt, 1).unwrap(), "Σ_2^d");
    assert_eq!(classify(&c4, &sig, Relation::Ge, 2).unwrap(), "Π_3^d");
    assert!(matches!(
        classify(&c4, &sig, Relation::Le, 1),
        Err(EvalError::WrongPrefixClass { .. })
    ));
}
