use contlogic::forcing::{
    compile, dollar, exists_strategy_universal, forces_sup_leq, play_game, Bound, Condition, ConsistencyOracle,
    ForcingAnswer, MetricInstance, PassThrough, RandomForall, Scripted,
};
use contlogic::formula::{Formula, Term};
use contlogic::numeric::{pow2_neg, q, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point<R: Rng>(rng: &mut R, with_x: bool) -> Term {
    let top = if with_x { 3 } else { 2 };
    match rng.gen_range(0..=top) {
        3 => Term::var("x"),
        i => Term::c(i + 1),
    }
}

/// Depth-one piecewise linear formulas over `x, c1..c3`.
fn small_formula<R: Rng>(rng: &mut R, with_x: bool) -> Formula {
    let d = |rng: &mut R| Formula::d(point(rng, with_x), point(rng, with_x));
    match rng.gen_range(0..4) {
        0 => d(rng),
        1 => Formula::dm(Formula::one(), d(rng)),
        2 => Formula::half(d(rng)),
        _ => {
            let a = d(rng);
            Formula::dm(a, d(rng))
        }
    }
}

fn eighth<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(1..=8), 8)
}

fn random_condition<R: Rng>(rng: &mut R, inst: &MetricInstance) -> Condition {
    let mut p = Condition::empty();
    for _ in 0..rng.gen_range(0..=3) {
        let cand = p.with(Bound::new(small_formula(rng, false), eighth(rng)).unwrap());
        if inst.is_condition(&cand).unwrap() {
            p = cand;
        }
    }
    p
}

fn psi_with_x<R: Rng>(rng: &mut R) -> Formula {
    loop {
        let psi = small_formula(rng, true);
        if psi.free_vars().contains("x") {
            return psi;
        }
    }
}

#[test]
fn conjunction_lemma_on_generated_cases() {
    let inst = MetricInstance::new();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut premises = 0;
    for _ in 0..150 {
        let p = random_condition(&mut rng, &inst);
        let psi = psi_with_x(&mut rng);
        let r = q(rng.gen_range(0..8), 8);
        let b = 5;
        let yes_all = (1..=5).all(|n| forces_sup_leq(&p, &psi, "x", &(&r + pow2_neg(n)), b, &inst).unwrap() == ForcingAnswer::Yes);
        if yes_all {
            premises += 1;
            let at_r = forces_sup_leq(&p, &psi, "x", &r, b, &inst).unwrap();
            assert!(!at_r.is_no(), "p = {p}, psi = {psi:?}, r = {r}");
        }
    }
    assert!(premises > 20, "only {premises} cases met the premise");
}

#[test]
fn forcing_is_monotone_under_extension() {
    let inst = MetricInstance::new();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    for _ in 0..150 {
        let p = random_condition(&mut rng, &inst);
        let psi = psi_with_x(&mut rng);
        let r = q(rng.gen_range(0..8), 8);
        if forces_sup_leq(&p, &psi, "x", &r, 6, &inst).unwrap() != ForcingAnswer::Yes {
            continue;
        }
        let extra = Bound::new(small_formula(&mut rng, false), eighth(&mut rng)).unwrap();
        let qc = p.with(extra);
        if !inst.is_condition(&qc).unwrap() {
            continue;
        }
        checked += 1;
        assert!(!forces_sup_leq(&qc, &psi, "x", &r, 6, &inst).unwrap().is_no());
    }
    assert!(checked > 10);
}

#[test]
fn no_answers_carry_checkable_witnesses() {
    let inst = MetricInstance::new();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut nos = 0;
    for _ in 0..100 {
        let p = random_condition(&mut rng, &inst);
        let psi = psi_with_x(&mut rng);
        let r = q(rng.gen_range(0..8), 8);
        if let ForcingAnswer::No(w) = forces_sup_leq(&p, &psi, "x", &r, 8, &inst).unwrap() {
            nos += 1;
            let psi_c = psi.substitute("x", &Term::c(w.fresh));
            assert!(w.space.is_pseudometric());
            assert!(w.space.satisfies(&p));
            assert_eq!(w.space.value(&psi_c).unwrap(), w.value);
            assert!(w.value >= &r + &w.delta);
            // θ holds in the model: max_i (φ_i -. s_i) = 0 there
            assert_eq!(w.space.value(&w.theta).unwrap(), Q::from_integer(0.into()));
            assert!(dollar(&p, w.granularity).contains(&w.theta));
        }
    }
    assert!(nos > 10);
}

#[test]
fn compiled_spaces_satisfy_the_whole_chain() {
    let inst = MetricInstance::new();
    for seed in 100..110 {
        let mut fa = RandomForall::new(seed);
        let mut ex = exists_strategy_universal();
        let t = play_game(&mut fa, &mut ex, 10, &inst).unwrap();
        let space = compile(&t, &inst).unwrap();
        assert!(space.is_pseudometric());
        for (i, m) in t.moves.iter().enumerate() {
            assert!(space.satisfies(&m.condition));
            if i > 0 {
                assert!(m.condition.extends(&t.moves[i - 1].condition));
            }
        }
    }
}

#[test]
fn pass_through_games_and_the_two_bound_play() {
    let inst = MetricInstance::new();
    let t = play_game(&mut PassThrough, &mut PassThrough, 4, &inst).unwrap();
    assert_eq!(t.rounds(), 4);
    let d = |a, b| Formula::d(Term::c(a), Term::c(b));
    let mut fa = Scripted::new(vec![
        vec![Bound::new(d(1, 2), q(1, 4)).unwrap()],
        vec![Bound::new(d(2, 3), q(1, 4)).unwrap()],
    ]);
    let mut ex = exists_strategy_universal();
    let t = play_game(&mut fa, &mut ex, 4, &inst).unwrap();
    let space = compile(&t, &inst).unwrap();
    assert_eq!(space.index.consts, vec![1, 2, 3]);
    assert!(space.distance(1, 2).unwrap() < q(1, 4));
    assert!(space.distance(2, 3).unwrap() < q(1, 4));
    assert!(space.is_pseudometric());
}

#[test]
fn empty_transcript_compiles_to_the_empty_space() {
    let inst = MetricInstance::new();
    let t = contlogic::forcing::Transcript::default();
    let space = compile(&t, &inst).unwrap();
    assert!(space.index.consts.is_empty());
}

/// Five YES answers above `r` do not rule out a NO at `r` once the budget
/// resolves gaps finer than `2^-5`; the premise over all `n <= b` does.
#[test]
fn conjunction_premise_needs_the_full_budget() {
    let inst = MetricInstance::new();
    let d12 = Formula::d(Term::c(1), Term::c(2));
    let p = Condition::from_bounds([Bound::new(d12.clone(), pow2_neg(6)).unwrap()]);
    let psi = Formula::dm(d12, Formula::d(Term::var("x"), Term::var("x")));
    let r = Q::from_integer(0.into());
    let b = 10;
    assert!((1..=5).all(|n| forces_sup_leq(&p, &psi, "x", &pow2_neg(n), b, &inst).unwrap() == ForcingAnswer::Yes));
    assert!(forces_sup_leq(&p, &psi, "x", &r, b, &inst).unwrap().is_no());
    assert!(!(1..=b).all(|n| forces_sup_leq(&p, &psi, "x", &pow2_neg(n), b, &inst).unwrap() == ForcingAnswer::Yes));
    assert!(!forces_sup_leq(&p, &psi, "x", &r, 5, &inst).unwrap().is_no());
}
