use super::*;
use crate::formula::Term;
use crate::numeric::q;
use crate::parser::parse_formula;

fn f(text: &str) -> Formula {
    parse_formula(text, &Signature::metric()).unwrap()
}

fn cond(items: &[(&str, Q)]) -> Condition {
    Condition::from_bounds(items.iter().map(|(t, r)| Bound::new(f(t), r.clone()).unwrap()))
}

fn triangle_violation() -> Condition {
    cond(&[
        ("d(c1, c2)", q(1, 4)),
        ("d(c2, c3)", q(1, 4)),
        ("1 -. d(c1, c3)", q(1, 4)),
    ])
}

#[test]
fn conditions() {
    let inst = MetricInstance::new();
    assert!(inst.is_condition(&Condition::empty()).unwrap());
    assert!(!inst.is_condition(&triangle_violation()).unwrap());
    assert!(inst.is_condition(&cond(&[("d(c1, c2)", Q::one())])).unwrap());
    // boundary cases need strictness: d < 1/2 and d > 1/2 cannot both hold
    assert!(!inst
        .is_condition(&cond(&[("d(c1, c2)", q(1, 2)), ("1 -. d(c1, c2)", q(1, 2))]))
        .unwrap());
}

#[test]
fn dollar_slices() {
    let p = cond(&[("d(c1, c2)", q(1, 2))]);
    let s = dollar(&p, 1);
    assert_eq!(s, vec![Formula::dm(f("d(c1, c2)"), Formula::zero())]);
    assert_eq!(dollar(&Condition::empty(), 3), vec![Formula::zero()]);
    let p2 = cond(&[("d(c1, c2)", q(1, 2)), ("d(c2, c3)", q(3, 4))]);
    assert_eq!(dollar(&p2, 2).len(), 2 * 3);
    assert_eq!(dollar(&p2, 3).len(), 4 * 6);
}

#[test]
fn dollar_slices_refine() {
    let inst = MetricInstance::new();
    let p = cond(&[("d(c1, c2)", q(1, 2)), ("half(d(c2, c3))", q(1, 4))]);
    // every θ at level g dominates some θ' at level g+1 pointwise: the same
    // thresholds are still on the finer grid
    for g in 1..4 {
        let coarse = dollar(&p, g);
        let fine = dollar(&p, g + 1);
        for theta in &coarse {
            assert!(fine.contains(theta));
        }
    }
    let _ = inst;
}

#[test]
fn forcing_examples() {
    let inst = MetricInstance::new();
    let x = Term::var("x");
    let e = Condition::empty();
    let dxx = Formula::d(x.clone(), x.clone());
    assert_eq!(forces_sup_leq(&e, &dxx, "x", &Q::zero(), 8, &inst).unwrap(), ForcingAnswer::Yes);
    let p = cond(&[("d(c1, c2)", q(1, 8))]);
    assert_eq!(forces_sup_leq(&p, &f("d(c1, c2)"), "x", &q(1, 8), 8, &inst).unwrap(), ForcingAnswer::Yes);
    let dxc1 = Formula::d(x, Term::c(1));
    match forces_sup_leq(&e, &dxc1, "x", &q(1, 2), 8, &inst).unwrap() {
        ForcingAnswer::No(w) => {
            assert_eq!(w.value, q(3, 4));
            assert_eq!(w.space.distance(1, w.fresh), Some(q(3, 4)));
            assert!(w.space.is_pseudometric());
        }
        other => panic!("expected NO, got {other:?}"),
    }
}

#[test]
fn fp_examples() {
    let inst = MetricInstance::new();
    let e = Condition::empty();
    let r = fp_estimate(&e, &f("d(c1, c1)"), 0, 10, &inst).unwrap();
    assert_eq!((r.lower, r.upper), (Some(Q::zero()), Some(Q::zero())));
    let r = fp_estimate(&e, &f("1"), 0, 10, &inst).unwrap();
    assert_eq!((r.lower, r.upper), (Some(Q::one()), Some(Q::one())));
    let p = cond(&[("d(c1, c2)", q(1, 8))]);
    let r = fp_estimate(&p, &f("d(c1, c2)"), 0, 10, &inst).unwrap();
    assert!(r.upper.unwrap() <= q(1, 8));
    assert!(r.lower.unwrap() >= q(1, 8) - pow2_neg(9));
    // inf over a fresh point: it may sit on c1
    let r = fp_estimate(&p, &f("inf x. d(x, c1)"), 1, 4, &inst).unwrap();
    assert_eq!(r.upper, Some(Q::zero()));
    assert_eq!(r.lower, Some(Q::zero()));
    let r = fp_estimate(&e, &f("sup x. d(x, c1)"), 0, 6, &inst).unwrap();
    assert_eq!(r.upper, Some(Q::one()));
}

#[test]
fn games() {
    let inst = MetricInstance::new();
    let t = play_game(&mut PassThrough, &mut PassThrough, 4, &inst).unwrap();
    assert_eq!(t.rounds(), 4);
    for w in t.moves.windows(2) {
        assert!(w[1].condition.extends(&w[0].condition));
    }
    let bad = triangle_violation().bounds.into_iter().collect();
    let mut cheat = Scripted::new(vec![bad]);
    match play_game(&mut cheat, &mut PassThrough, 2, &inst) {
        Err(ForcingError::IllegalMove { player, .. }) => assert_eq!(player, Player::Forall),
        other => panic!("expected an illegal move, got {other:?}"),
    }
}

#[test]
fn universal_strategy_pins_distances() {
    let inst = MetricInstance::new();
    let mut e = exists_strategy_universal();
    let t = play_game(&mut PassThrough, &mut e, 6, &inst).unwrap();
    let last = e.history.last().unwrap();
    assert!(!last.is_empty());
    for (lo, hi) in last.values() {
        assert!(hi - lo <= pow2_neg(6));
    }
    for w in e.history.windows(2) {
        for (k, (lo, hi)) in &w[0] {
            let (lo2, hi2) = &w[1][k];
            assert!(lo2 >= lo && hi2 <= hi);
        }
    }
    let space = compile(&t, &inst).unwrap();
    assert!(space.satisfies(&t.last()) && space.is_pseudometric());

    let two = vec![vec![Bound::new(f("d(c1, c2)"), q(1, 4)).unwrap()], vec![Bound::new(f("d(c2, c3)"), q(1, 4)).unwrap()]];
    let mut e = exists_strategy_universal();
    let t = play_game(&mut Scripted::new(two), &mut e, 4, &inst).unwrap();
    let space = compile(&t, &inst).unwrap();
    assert!(space.distance(1, 2).unwrap() < q(1, 4));
    assert!(space.distance(2, 3).unwrap() < q(1, 4));
    assert!(space.is_pseudometric());
    for m in &t.moves {
        assert!(space.satisfies(&m.condition));
    }
}

#[test]
fn transcripts_replay_exactly() {
    let inst = MetricInstance::new();
    let mut e = exists_strategy_universal();
    let t = play_game(&mut RandomForall::new(5), &mut e, 6, &inst).unwrap();
    let text = t.to_jsonl();
    let back = transcript_from_jsonl(&text).unwrap();
    assert_eq!(back, t);
    assert_eq!(back.to_jsonl(), text);
    assert_eq!(compile(&t, &inst).unwrap(), compile(&back, &inst).unwrap());
    assert_eq!(compile(&Transcript::default(), &inst).unwrap(), CompiledSpace::empty());
}

#[test]
fn monotonicity_of_forcing() {
    let inst = MetricInstance::new();
    let x = Term::var("x");
    let psi = Formula::dm(Formula::d(x.clone(), Term::c(1)), Formula::d(x, Term::c(2)));
    let p = cond(&[("d(c1, c2)", q(1, 4))]);
    let q2 = p.with(Bound::new(f("d(c2, c3)"), q(1, 2)).unwrap());
    for k in 1..8 {
        let r = Q::new(k.into(), 8.into());
        if forces_sup_leq(&p, &psi, "x", &r, 8, &inst).unwrap() == ForcingAnswer::Yes {
            assert!(!forces_sup_leq(&q2, &psi, "x", &r, 8, &inst).unwrap().is_no());
        }
    }
    assert_eq!(forces_sup_leq(&p, &psi, "x", &q(1, 4), 8, &inst).unwrap(), ForcingAnswer::Yes);
}
