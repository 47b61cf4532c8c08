//! Deterministic end-to-end checks with independent oracles: Pascal's
//! triangle for central binomials, a walk count on the 4-regular tree,
//! exhaustive evaluation on finite spaces, and exact post-hoc checks of
//! every solver output. Output lines carry no timings.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coding::{decode, encode, f as code_f, g as code_g, GodelCode};
use crate::eval::{eval, eval_exact, EvalBudget, TestStructure};
use crate::forcing::{
    compile, exists_strategy_universal, forces_sup_leq, play_game, Bound, Condition, ConsistencyOracle,
    ForcingAnswer, MetricInstance, RandomForall,
};
use crate::formula::{prenex, random_formula, random_prenex_sentence, Formula, RandomFormulaConfig, Signature, Term};
use crate::group::{lambda_norm_lower, lambda_norm_lower_sweep, moments, moments_direct, GroupAlgebraElement, GroupSpec};
use crate::matrix::{relative_gap, GaussMatrix};
use crate::numeric::{biguint_to_q, fmt_exact, pow2_neg, q, to_f64, GaussQ, Q};
use crate::presentation::{CstarLambdaPresentation, NormReport, Presentation};

/// Output format version of `selftest` lines.
pub const SELFTEST_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub criterion: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

impl CheckResult {
    pub fn to_line(&self) -> String {
        json!({
            "schema": SELFTEST_SCHEMA,
            "criterion": self.criterion,
            "name": self.name,
            "pass": self.pass,
            "detail": self.detail,
        })
        .to_string()
    }
}

pub const CRITERIA: [(u32, &str); 8] = [
    (1, "coding round trip"),
    (2, "coding lemma functions"),
    (3, "integer moments"),
    (4, "free group moments"),
    (5, "torus norm"),
    (6, "matrix bounds"),
    (7, "evaluator soundness"),
    (8, "forcing instance"),
];

pub fn run_criterion(n: u32) -> CheckResult {
    let (pass, detail) = match n {
        1 => coding_round_trip(),
        2 => coding_lemma(),
        3 => integer_moments(),
        4 => free_group_moments(),
        5 => torus_norm(),
        6 => matrix_bounds(),
        7 => evaluator_soundness(),
        8 => forcing_instance(),
        _ => (false, json!({ "error": "no such criterion" })),
    };
    let name = CRITERIA.iter().find(|(i, _)| *i == n).map_or("unknown", |(_, s)| s);
    CheckResult {
        criterion: n,
        name,
        pass,
        detail,
    }
}

pub fn run_all() -> Vec<CheckResult> {
    CRITERIA.iter().map(|(n, _)| run_criterion(*n)).collect()
}

fn presets() -> [Signature; 3] {
    [Signature::metric(), Signature::cstar(), Signature::tvna()]
}

fn coding_round_trip() -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = 0;
    for i in 0..500 {
        let sig = &presets()[i % 3];
        let phi = random_formula(&mut rng, sig, &RandomFormulaConfig::new(6));
        let ok = encode(&phi, sig).and_then(|c| decode(&c, sig)).map_or(false, |back| back == phi);
        failures += usize::from(!ok);
    }
    let mut decoded = 0;
    for i in 0..1000 {
        let sig = &presets()[i % 3];
        // half small, where codes are dense, half up to 256 bits
        let bits = if i % 2 == 0 { rng.gen_range(1..=24) } else { rng.gen_range(25..=256) };
        let bytes: Vec<u8> = (0..bits / 8 + 1).map(|_| rng.gen()).collect();
        let mut n = BigUint::from_bytes_le(&bytes);
        n %= BigUint::one() << bits;
        // total: every natural gets an answer
        if decode(&GodelCode(n), sig).is_ok() {
            decoded += 1;
        }
    }
    (failures == 0, json!({ "round_trip_failures": failures, "random_naturals": 1000, "decoded_as_formulas": decoded }))
}

fn coding_lemma() -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    for i in 0..100 {
        let sig = &presets()[i % 3];
        let cfg = RandomFormulaConfig::new(4);
        let (phi, psi) = (random_formula(&mut rng, sig, &cfg), random_formula(&mut rng, sig, &cfg));
        let n = rng.gen_range(0..8u32);
        let (p, q) = (encode(&phi, sig).unwrap(), encode(&psi, sig).unwrap());
        let ok_f = code_f(&p, n, sig).and_then(|c| decode(&c, sig)).ok() == Some(Formula::dm(phi.clone(), Formula::pow2_neg(n)));
        let ok_g = code_g(&p, &q, sig).and_then(|c| decode(&c, sig)).ok() == Some(Formula::dm(phi, psi));
        failures += usize::from(!ok_f) + usize::from(!ok_g);
    }
    (failures == 0, json!({ "cases": 100, "failures": failures }))
}

/// `C(2n, n)` from Pascal's triangle.
pub fn central_binomials(nmax: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    let mut out = vec![BigUint::one()];
    for len in 1..=2 * nmax {
        let mut next = vec![BigUint::one(); len + 1];
        for k in 1..len {
            next[k] = &row[k - 1] + &row[k];
        }
        row = next;
        if len % 2 == 0 {
            out.push(row[len / 2].clone());
        }
    }
    out
}

/// Closed walks of length `2n` at a vertex of the `2r`-regular tree, by
/// dynamic programming on the distance to the start.
pub fn tree_closed_walks(degree: usize, nmax: usize) -> Vec<BigUint> {
    let len = 2 * nmax;
    let mut w = vec![BigUint::zero(); len + 2];
    w[0] = BigUint::one();
    let mut out = vec![BigUint::one()];
    for step in 1..=len {
        let mut next = vec![BigUint::zero(); len + 2];
        for d in 0..=len {
            if w[d].is_zero() {
                continue;
            }
            if d == 0 {
                next[1] += &w[0] * BigUint::from(degree);
            } else {
                next[d - 1] += &w[d];
                next[d + 1] += &w[d] * BigUint::from(degree - 1);
            }
        }
        w = next;
        if step % 2 == 0 {
            out.push(w[0].clone());
        }
    }
    out
}

fn integer_moments() -> (bool, Value) {
    let spec = Arc::new(GroupSpec::integers());
    let a = GroupAlgebraElement::parse(&spec, "u + u^-1").unwrap();
    let m = moments(&a, 40).unwrap();
    let oracle = central_binomials(40);
    let exact = (1..=40).all(|n| m[n] == biguint_to_q(&oracle[n]));
    let low = lambda_norm_lower(&a, 40, 20).unwrap();
    let in_range = low >= q(193, 100) && low <= q(2, 1);
    (
        exact && in_range,
        json!({ "moments_match": exact, "lower_n40_k20": fmt_exact(&low), "approx": to_f64(&low) }),
    )
}

fn free_group_moments() -> (bool, Value) {
    let spec = Arc::new(GroupSpec::free(&["u", "v"]));
    let a = GroupAlgebraElement::parse(&spec, "u + u^-1 + v + v^-1").unwrap();
    let m = moments(&a, 25).unwrap();
    let oracle = tree_closed_walks(4, 25);
    let exact = (1..=25).all(|n| m[n] == biguint_to_q(&oracle[n]));
    let direct = moments_direct(&a, 6).unwrap();
    let routes_agree = (0..=6).all(|n| direct[n] == m[n]);
    let sweep = lambda_norm_lower_sweep(&a, 25, 20).unwrap();
    let monotone = sweep.windows(2).all(|w| w[0] <= w[1]);
    let last = sweep.last().unwrap().clone();
    // 2√3 from above: 3.4641^2 > 12
    let in_range = last >= q(310, 100) && &last * &last <= Q::from_integer(12.into());
    (
        exact && routes_agree && monotone && in_range,
        json!({
            "moments_match": exact,
            "direct_route_agrees_to_6": routes_agree,
            "nondecreasing": monotone,
            "lower_n25_k20": fmt_exact(&last),
            "approx": to_f64(&last),
        }),
    )
}

fn torus_norm() -> (bool, Value) {
    let c = CstarLambdaPresentation::new(GroupSpec::integers());
    let a = GroupAlgebraElement::parse(c.spec(), "1/2*u + 1/2*u^-1").unwrap();
    let (lo, hi) = match c.norm(&a, 10, 0) {
        NormReport::TwoSided { lo, hi } => (lo, hi),
        NormReport::LowerOnly { .. } => return (false, json!({ "error": "expected a two-sided report" })),
    };
    let contains_one = lo <= Q::one() && Q::one() <= hi && &hi - &lo <= pow2_neg(10);
    let tol = pow2_neg(10);
    let below = (1..=30).all(|n| lambda_norm_lower(&a, n, 10).map_or(false, |l| l <= &hi + &tol));
    (
        contains_one && below,
        json!({ "lo": fmt_exact(&lo), "hi": fmt_exact(&hi), "moment_lowers_below": below }),
    )
}

/// Random `n x n` matrix with entries `a/4 + (b/4) i`, `|a|, |b| <= 8`.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> GaussMatrix {
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| GaussQ::new(q(rng.gen_range(-8..=8), 4), q(rng.gen_range(-8..=8), 4)))
                .collect()
        })
        .collect();
    GaussMatrix::from_rows(rows).expect("square")
}

fn matrix_bounds() -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut monotone = true;
    let mut lower_ok = true;
    let mut worst_gap = Q::zero();
    let mut two_norm_ok = true;
    for _ in 0..50 {
        let a = random_matrix(&mut rng, 4);
        let ups = a.opnorm_upper_sweep(8, crate::matrix::OPNORM_BITS);
        monotone &= ups.windows(2).all(|w| w[1] <= w[0]);
        let up8 = ups[8].clone();
        let cands = a.rayleigh_candidates(&mut rng, 32, 30, 24);
        let low = a.best_lower(&cands, 30).unwrap_or_else(Q::zero);
        lower_ok &= low <= up8;
        let gap = relative_gap(&low, &up8);
        if gap > worst_gap {
            worst_gap = gap;
        }
        two_norm_ok &= a.two_norm(10).hi <= &up8 + pow2_neg(10);
    }
    let gap_ok = worst_gap <= q(2, 100);
    (
        monotone && lower_ok && gap_ok && two_norm_ok,
        json!({
            "upper_nonincreasing": monotone,
            "lower_below_upper": lower_ok,
            "worst_relative_gap": to_f64(&worst_gap),
            "two_norm_below_upper": two_norm_ok,
        }),
    )
}

fn evaluator_soundness() -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sig = Signature::metric();
    let cfg = RandomFormulaConfig::new(2).sentences();
    let (mut sound, mut prenex_ok, mut two_sided) = (0, 0, 0);
    for _ in 0..200 {
        let t = TestStructure::random(&mut rng, 6);
        let phi = random_prenex_sentence(&mut rng, &sig, &cfg, 2, 2);
        let exact = eval_exact(&phi, &t).unwrap();
        prenex_ok += usize::from(eval_exact(&prenex(&phi), &t).unwrap() == exact);
        let full = eval(&phi, &t, &EvalBudget::new(t.len() as u64, 12)).unwrap();
        let partial = eval(&phi, &t, &EvalBudget::new(rng.gen_range(1..=t.len() as u64), 12)).unwrap();
        two_sided += usize::from(full.certified_lower.is_some() && full.certified_upper.is_some());
        let brackets = |r: &crate::eval::EvalResult| {
            r.certified_lower.as_ref().map_or(true, |l| *l <= exact)
                && r.certified_upper.as_ref().map_or(true, |u| exact <= *u)
        };
        let ok = brackets(&full) && brackets(&partial);
        sound += usize::from(ok);
    }
    (
        sound == 200 && two_sided == 200 && prenex_ok == 200,
        json!({ "sentences": 200, "sound": sound, "two_sided": two_sided, "prenex_preserved": prenex_ok }),
    )
}

fn forcing_instance() -> (bool, Value) {
    let inst = MetricInstance::new();
    let d = |a: u32, b: u32| Formula::d(Term::c(a), Term::c(b));
    let triple = Condition::from_bounds([
        Bound::new(d(1, 2), q(1, 4)).unwrap(),
        Bound::new(d(2, 3), q(1, 4)).unwrap(),
        Bound::new(Formula::dm(Formula::one(), d(1, 3)), q(1, 4)).unwrap(),
    ]);
    let rejected = inst.is_condition(&triple) == Ok(false);
    let x = Term::var("x");
    let e = Condition::empty();
    let yes = forces_sup_leq(&e, &Formula::d(x.clone(), x.clone()), "x", &Q::zero(), 10, &inst) == Ok(ForcingAnswer::Yes);
    let psi = Formula::d(x, Term::c(1));
    let (no, witness) = match forces_sup_leq(&e, &psi, "x", &q(1, 2), 10, &inst) {
        Ok(ForcingAnswer::No(w)) => {
            let theta_holds = w.space.value(&w.theta).map_or(false, |v| v.is_zero());
            let ok = w.space.is_pseudometric() && w.value > q(1, 2) && theta_holds;
            (ok, json!({ "value": fmt_exact(&w.value), "delta": fmt_exact(&w.delta), "granularity": w.granularity }))
        }
        other => (false, json!({ "unexpected": format!("{other:?}") })),
    };
    let mut games_ok = 0;
    for seed in 0..20 {
        let mut forall = RandomForall::new(seed);
        let mut exists = exists_strategy_universal();
        let Ok(t) = play_game(&mut forall, &mut exists, 8, &inst) else {
            continue;
        };
        let Ok(space) = compile(&t, &inst) else {
            continue;
        };
        let ok = t.rounds() == 8 && space.is_pseudometric() && t.moves.iter().all(|m| space.satisfies(&m.condition));
        games_ok += usize::from(ok);
    }
    (
        rejected && yes && no && games_ok == 20,
        json!({
            "triangle_triple_rejected": rejected,
            "reflexivity_forced": yes,
            "fresh_point_witness": witness,
            "legal_games": games_ok,
        }),
    )
}
