//! Forcing checks through exact semantic consequence over the base theory.

use num_traits::{One, Zero};

use super::{
    dollar_witness, pl_form, CompiledSpace, Condition, ForcingError, MetricInstance, Objective,
    PairIndex, Search, Sense,
};
use crate::formula::{split_prenex, Formula, Quantifier, Term};
use crate::numeric::{fmt_exact, pow2_neg, q_max, q_min, Q};

/// Model of `p` with a fresh point where `ψ` exceeds `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoWitness {
    /// `θ ∈ p^$` satisfied by `space`.
    pub theta: Formula,
    pub granularity: u32,
    /// Largest `2^-j` with `ψ(c) >= r + 2^-j`.
    pub delta: Q,
    pub fresh: u32,
    pub value: Q,
    pub space: CompiledSpace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForcingAnswer {
    Yes,
    No(Box<NoWitness>),
    Unknown(String),
}

impl ForcingAnswer {
    pub fn label(&self) -> &'static str {
        match self {
            ForcingAnswer::Yes => "YES",
            ForcingAnswer::No(_) => "NO",
            ForcingAnswer::Unknown(_) => "UNKNOWN",
        }
    }

    pub fn is_no(&self) -> bool {
        matches!(self, ForcingAnswer::No(_))
    }
}

fn fresh_after(p: &Condition, phi: &Formula) -> u32 {
    p.max_constant().max(phi.fresh_constants().into_iter().max().unwrap_or(0)) + 1
}

/// Whether `p ⊩ sup_x ψ(x) <= r`. The answer is YES exactly when no model
/// of `p` has a point with `ψ > r`; a NO comes with such a model, a
/// `θ ∈ dollar(p, g)` it satisfies and a gap `δ`, both needing `g, j <=
/// budget`; UNKNOWN when the witness is finer than the budget or the
/// solver runs out.
pub fn forces_sup_leq(
    p: &Condition,
    psi: &Formula,
    x: &str,
    r: &Q,
    budget: u32,
    inst: &MetricInstance,
) -> Result<ForcingAnswer, ForcingError> {
    p.validate()?;
    let c = fresh_after(p, psi);
    let psi_c = psi.substitute(x, &Term::c(c));
    if !psi_c.is_sentence() || !psi_c.is_quantifier_free() {
        return Err(ForcingError::NotQuantifierFree);
    }
    let index = PairIndex::new(p.constants().into_iter().chain(psi_c.fresh_constants()).chain([c]));
    let mut region = p.region(index.clone())?;
    region.push(pl_form(&psi_c, &index)?.lower, Sense::Above(r.clone()));
    let mut work = inst.work();
    let (_, dist) = match inst.model_of(&region, &mut work) {
        Ok(Some(m)) => m,
        Ok(None) => return Ok(ForcingAnswer::Yes),
        Err(ForcingError::BudgetExhausted) => return Ok(ForcingAnswer::Unknown("solver budget exhausted".into())),
        Err(e) => return Err(e),
    };
    let space = CompiledSpace { index, dist };
    let value = space.value(&psi_c)?;
    let Some(j) = (1..=budget).find(|&j| value >= r + pow2_neg(j)) else {
        return Ok(ForcingAnswer::Unknown(format!("gap {} is below 2^-{budget}", fmt_exact(&(&value - r)))));
    };
    let Some((granularity, theta)) = dollar_witness(p, &space, budget) else {
        return Ok(ForcingAnswer::Unknown("witness needs a finer slice of p^$".into()));
    };
    Ok(ForcingAnswer::No(Box::new(NoWitness {
        theta,
        granularity,
        delta: pow2_neg(j),
        fresh: c,
        value,
        space,
    })))
}

/// Certified bounds on `F_p(φ)`; `None` where nothing beyond `[0, 1]` is
/// certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpEstimate {
    pub lower: Option<Q>,
    pub upper: Option<Q>,
}

/// `sup` of a quantifier-free sentence over the closed region of `p`
/// (an upper bound on `F_p`) and its value at interior optima (lower).
fn qf_bounds(p: &Condition, phi: &Formula, inst: &MetricInstance) -> Result<(Option<Q>, Option<Q>), ForcingError> {
    let index = PairIndex::new(p.constants().into_iter().chain(phi.fresh_constants()));
    let region = p.region(index.clone())?;
    let form = pl_form(phi, &index)?;
    let mut work = inst.work();
    let Some(cells) = region.closed_cells(&mut work) else {
        return Ok((None, None));
    };
    let mut upper: Option<Q> = None;
    for cell in &cells {
        for f in &form.lower {
            if let Some((v, _)) = region.optimize(cell, &Objective::MaxMin(f.clone(), Q::zero()), &mut work) {
                upper = Some(upper.map_or(v.clone(), |u| q_max(&u, &v)));
            }
        }
    }
    let mut lower = None;
    if let Search::Feasible(cell) = region.strict_search(&mut work) {
        let t0 = &cell.margin / Q::from_integer(2.into());
        for f in &form.lower {
            if let Some((_, x)) = region.optimize(&cell.choice, &Objective::MaxMin(f.clone(), t0.clone()), &mut work) {
                let v = super::pl_value(phi, &index, &x)?;
                lower = Some(lower.map_or(v.clone(), |l: Q| q_max(&l, &v)));
            }
        }
    }
    Ok((lower, upper))
}

/// Infimum of a quantifier-free sentence over the closed region of `q`.
fn qf_inf(q: &Condition, phi: &Formula, inst: &MetricInstance) -> Option<Q> {
    let index = PairIndex::new(q.constants().into_iter().chain(phi.fresh_constants()));
    let region = q.region(index.clone()).ok()?;
    let form = pl_form(phi, &index).ok()?;
    let mut work = inst.work();
    let cells = region.closed_cells(&mut work)?;
    let mut best: Option<Q> = None;
    for cell in &cells {
        for e in &form.upper {
            if let Some((v, _)) = region.optimize(cell, &Objective::MinMax(e.clone(), Q::zero()), &mut work) {
                best = Some(best.map_or(v.clone(), |b| q_min(&b, &v)));
            }
        }
    }
    best
}

fn bisect(
    p: &Condition,
    phi: &Formula,
    mut lower: Option<Q>,
    mut upper: Option<Q>,
    steps: u32,
    inst: &MetricInstance,
) -> Result<FpEstimate, ForcingError> {
    for _ in 0..steps {
        let lo = lower.clone().unwrap_or_else(Q::zero);
        let hi = upper.clone().unwrap_or_else(Q::one);
        if hi <= lo {
            break;
        }
        let mid = crate::numeric::floor_dyadic(&((&lo + &hi) / Q::from_integer(2.into())), steps + 2);
        if mid <= lo || mid >= hi {
            break;
        }
        match forces_sup_leq(p, phi, "_", &mid, steps + 2, inst)? {
            ForcingAnswer::Yes => upper = Some(mid),
            ForcingAnswer::No(w) => lower = Some(q_max(&lo, &w.value)),
            ForcingAnswer::Unknown(_) => break,
        }
    }
    Ok(FpEstimate { lower, upper })
}

/// Bounds on `F_p(φ) = inf{r : p ⊩ φ < r}` for prenex `φ`.
///
/// Quantifier-free and `sup` blocks: the supremum over models of `p`
/// (bound variables become fresh constants), from an LP maximum (upper),
/// interior optima and a bisection on `forces_sup_leq` (lower).
/// A single `inf` block: the upper bound is the least value over explicit
/// witnesses `c̄` drawn from the constants of `p` and fresh ones; the lower
/// bound is the best, over `q ⊇ p` with at most `depth` added pins, of the
/// infimum over models of `q`. Other prefixes are not estimated.
pub fn fp_estimate(
    p: &Condition,
    phi: &Formula,
    depth: usize,
    budget: u32,
    inst: &MetricInstance,
) -> Result<FpEstimate, ForcingError> {
    p.validate()?;
    let (prefix, matrix) = split_prenex(phi).map_err(|_| ForcingError::NotQuantifierFree)?;
    let mut next = fresh_after(p, phi);
    let mut fresh = Vec::new();
    let mut body = matrix.clone();
    for (_, x) in &prefix {
        body = body.substitute(x, &Term::c(next));
        fresh.push(next);
        next += 1;
    }
    if prefix.iter().all(|(q, _)| *q == Quantifier::Sup) {
        let (lower, upper) = qf_bounds(p, &body, inst)?;
        let lower = lower.map(|l| q_max(&l, &Q::zero()));
        if lower.is_some() && lower == upper {
            return Ok(FpEstimate { lower, upper });
        }
        return bisect(p, &body, lower, upper, budget, inst);
    }
    if !prefix.iter().all(|(q, _)| *q == Quantifier::Inf) {
        return Ok(FpEstimate { lower: None, upper: None });
    }
    // explicit witnesses
    let mut pool: Vec<u32> = p.constants().into_iter().collect();
    pool.extend(&fresh);
    let m = prefix.len();
    let mut upper: Option<Q> = None;
    let total = (pool.len() as u64).saturating_pow(m as u32).min(budget.max(1) as u64 * 8);
    for t in 0..total {
        let mut f = matrix.clone();
        let mut rest = t;
        for (_, x) in &prefix {
            let c = pool[(rest % pool.len() as u64) as usize];
            rest /= pool.len() as u64;
            f = f.substitute(x, &Term::c(c));
        }
        let (_, u) = qf_bounds(p, &f, inst)?;
        if let Some(u) = u {
            upper = Some(upper.map_or(u.clone(), |b| q_min(&b, &u)));
        }
    }
    // extensions q ⊇ p
    let mut lower = qf_inf(p, &body, inst);
    let mut frontier = vec![p.clone()];
    for _ in 0..depth {
        let mut next_frontier = Vec::new();
        for q in &frontier {
            for b in pin_candidates(q) {
                let q2 = q.with(b);
                if q2 == *q || !super::ConsistencyOracle::is_condition(inst, &q2)? {
                    continue;
                }
                if let Some(v) = qf_inf(&q2, &body, inst) {
                    lower = Some(lower.map_or(v.clone(), |l| q_max(&l, &v)));
                }
                next_frontier.push(q2);
            }
        }
        frontier = next_frontier;
    }
    Ok(FpEstimate { lower, upper })
}

/// Pins `d(c_a, c_b) < s` and `d(c_a, c_b) > s` for `s ∈ {1/4, 1/2, 3/4}`.
fn pin_candidates(q: &Condition) -> Vec<super::Bound> {
    let consts: Vec<u32> = q.constants().into_iter().collect();
    let mut out = Vec::new();
    for (i, &a) in consts.iter().enumerate() {
        for &b in &consts[i + 1..] {
            for k in 1..4 {
                let s = Q::new(k.into(), 4.into());
                let d = Formula::d(Term::c(a), Term::c(b));
                out.push(super::Bound::new(d.clone(), s.clone()).expect("valid"));
                out.push(super::Bound::new(Formula::dm(Formula::one(), d), Q::one() - s).expect("valid"));
            }
        }
    }
    out
}
