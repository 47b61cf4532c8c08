//! Budget-bounded evaluation of sentences over structures.
//!
//! Quantifier-free sentences get two-sided enclosures. For quantified
//! sentences a `sup` block only certifies a lower bound (the max over
//! sampled points) and an `inf` block only an upper bound, unless the
//! structure is finite and the search exhaustive.

mod classify;
mod structures;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coding::CodingError;
use crate::formula::{prenex, split_prenex, Formula, FormulaError, Quantifier, Signature, Term};
use crate::numeric::{fmt_exact, q_max, q_min, GaussQ, Interval, Q};
use crate::presentation::PresentationError;

pub use classify::{classify, classify_prefix_label, hierarchy_label, Relation};
pub use structures::{PresentationStructure, TestStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("constant c{0} is not bound to a point")]
    UnboundConstant(u32),
    #[error("two-sided evaluation needs a two-sided presentation")]
    ModeMismatch,
    #[error("formula is not a sentence")]
    NotClosed,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("prefix class {found} does not fit level {level}")]
    WrongPrefixClass { found: String, level: u32 },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

/// A structure the evaluator can search: finitely many or enumerated
/// points and certified enclosures for atomic formulas.
pub trait Structure: Sync {
    type Elem: Clone + Send + Sync;

    fn signature(&self) -> Signature;
    /// Whether atomic enclosures reach any requested width.
    fn two_sided(&self) -> bool;
    /// `Some(n)` when quantifiers range over exactly the points `0..n`.
    fn finite_size(&self) -> Option<u64>;
    fn point(&self, index: u64) -> Result<Self::Elem, EvalError>;
    fn describe_point(&self, index: u64) -> String;
    fn fresh(&self, i: u32) -> Result<Self::Elem, EvalError>;
    fn named(&self, name: &str) -> Result<Self::Elem, EvalError>;
    fn apply(&self, f: &str, args: &[Self::Elem]) -> Result<Self::Elem, EvalError>;
    fn combine(
        &self,
        l: &GaussQ,
        a: &Self::Elem,
        m: &GaussQ,
        b: &Self::Elem,
    ) -> Result<Self::Elem, EvalError>;
    /// Enclosure of an atomic value; width at most `2^-k` when
    /// `two_sided()`.
    fn atom(&self, pred: &str, args: &[Self::Elem], k: u32) -> Result<Interval, EvalError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalBudget {
    /// Points examined per quantifier.
    pub points: u64,
    /// Target precision of the quantifier-free layer.
    pub k: u32,
    /// Per-variable overrides of `points`.
    pub overrides: BTreeMap<String, u64>,
}

impl EvalBudget {
    pub fn new(points: u64, k: u32) -> Self {
        assert!(points >= 1, "need at least one point per quantifier");
        EvalBudget {
            points,
            k,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_override(mut self, var: &str, points: u64) -> Self {
        self.overrides.insert(var.to_string(), points.max(1));
        self
    }

    fn points_for(&self, var: &str) -> u64 {
        self.overrides.get(var).copied().unwrap_or(self.points)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Position in the prenex prefix.
    pub position: usize,
    pub quantifier: Quantifier,
    pub var: String,
    pub point: u64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub certified_lower: Option<Q>,
    pub certified_upper: Option<Q>,
    pub estimate: Q,
    pub witnesses: Vec<Witness>,
    /// Widest enclosure of the quantifier-free layer met during the search.
    pub slack: Q,
    pub points_examined: u64,
}

impl EvalResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "certified_lower": self.certified_lower.as_ref().map(fmt_exact),
            "certified_upper": self.certified_upper.as_ref().map(fmt_exact),
            "estimate": fmt_exact(&self.estimate),
            "approx_estimate": crate::numeric::to_f64(&self.estimate),
            "witnesses": self.witnesses,
            "slack": fmt_exact(&self.slack),
            "points_examined": self.points_examined,
        })
    }
}

type Env<E> = Vec<(String, E)>;

pub(crate) fn eval_term<S: Structure + ?Sized>(
    s: &S,
    t: &Term,
    env: &Env<S::Elem>,
) -> Result<S::Elem, EvalError> {
    match t {
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, e)| e.clone())
            .ok_or(EvalError::NotClosed),
        Term::Fresh(i) => s.fresh(*i),
        Term::Named(n) => s.named(n),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(s, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            s.apply(f, &vals)
        }
        Term::Comb(l, a, m, b) => {
            let (a, b) = (eval_term(s, a, env)?, eval_term(s, b, env)?);
            s.combine(l, &a, m, &b)
        }
    }
}

/// Atomic occurrences that contribute to the value.
pub fn atom_count(phi: &Formula) -> usize {
    match phi {
        Formula::Atomic(..) => 1,
        Formula::Zero(_) | Formula::One(_) => 0,
        Formula::Half(a) | Formula::Sup(_, a) | Formula::Inf(_, a) => atom_count(a),
        Formula::DotMinus(a, b) => atom_count(a) + atom_count(b),
    }
}

/// Per-atom precision so that `n` atoms add up to width `2^-k`.
pub fn atom_precision(k: u32, n: usize) -> u32 {
    k + (n.max(1) as u64).next_power_of_two().trailing_zeros()
}

fn eval_matrix<S: Structure + ?Sized>(
    s: &S,
    phi: &Formula,
    env: &Env<S::Elem>,
    k: u32,
) -> Result<Interval, EvalError> {
    match phi {
        Formula::Atomic(p, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(s, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            s.atom(p, &vals, k)
        }
        Formula::Zero(_) => Ok(Interval::point(Q::zero())),
        Formula::One(_) => Ok(Interval::point(Q::one())),
        Formula::Half(a) => Ok(eval_matrix(s, a, env, k)?.half()),
        Formula::DotMinus(a, b) => {
            Ok(eval_matrix(s, a, env, k)?.dot_minus(&eval_matrix(s, b, env, k)?))
        }
        Formula::Sup(..) | Formula::Inf(..) => Err(FormulaError::NotPrenex.into()),
    }
}

/// Enclosure of a closed quantifier-free sentence, width at most `2^-k`.
pub fn eval_qf<S: Structure + ?Sized>(sigma: &Formula, s: &S, k: u32) -> Result<Interval, EvalError> {
    if !s.two_sided() {
        return Err(EvalError::ModeMismatch);
    }
    if !sigma.is_sentence() {
        return Err(EvalError::NotClosed);
    }
    sigma.check(&s.signature())?;
    eval_matrix(s, sigma, &Vec::new(), atom_precision(k, atom_count(sigma)))
}

struct Node {
    lower: Option<Q>,
    upper: Option<Q>,
    estimate: Q,
    path: Vec<u64>,
    slack: Q,
    examined: u64,
}

struct Search<'a, S: Structure + ?Sized> {
    s: &'a S,
    prefix: &'a [(Quantifier, String)],
    matrix: &'a Formula,
    budget: &'a EvalBudget,
    atom_k: u32,
    pinned: Option<&'a [u64]>,
}

impl<S: Structure + ?Sized> Search<'_, S> {
    fn block(&self, i: usize, env: &Env<S::Elem>) -> Result<Node, EvalError> {
        if i == self.prefix.len() {
            let iv = eval_matrix(self.s, self.matrix, env, self.atom_k)?;
            return Ok(Node {
                estimate: iv.midpoint(),
                slack: iv.width(),
                lower: Some(iv.lo),
                upper: Some(iv.hi),
                path: Vec::new(),
                examined: 0,
            });
        }
        let (q, x) = &self.prefix[i];
        let (indices, exhaustive): (Vec<u64>, bool) = match self.pinned {
            Some(p) => (vec![p[i]], false),
            None => match self.s.finite_size() {
                Some(n) => {
                    let m = self.budget.points_for(x).min(n);
                    ((0..m).collect(), m == n)
                }
                None => ((0..self.budget.points_for(x)).collect(), false),
            },
        };
        let children = indices
            .par_iter()
            .map(|&j| {
                let mut env2 = env.clone();
                env2.push((x.clone(), self.s.point(j)?));
                self.block(i + 1, &env2)
            })
            .collect::<Result<Vec<Node>, EvalError>>()?;
        Ok(combine_children(*q, &indices, children, exhaustive))
    }
}

/// Index-ordered reduction: ties go to the earliest point.
fn combine_children(q: Quantifier, indices: &[u64], children: Vec<Node>, exhaustive: bool) -> Node {
    let sup = q == Quantifier::Sup;
    let better = |a: &Q, b: &Q| if sup { a > b } else { a < b };
    let pick = |f: &dyn Fn(&Node) -> Option<Q>| -> Option<(usize, Q)> {
        let mut best: Option<(usize, Q)> = None;
        for (idx, c) in children.iter().enumerate() {
            if let Some(v) = f(c) {
                if best.as_ref().map_or(true, |(_, b)| better(&v, b)) {
                    best = Some((idx, v));
                }
            }
        }
        best
    };
    // the certified side of this block
    let certified = pick(&|c| if sup { c.lower.clone() } else { c.upper.clone() });
    let by_estimate = pick(&|c| Some(c.estimate.clone())).expect("at least one point");
    let other = if exhaustive && children.iter().all(|c| if sup { c.upper.is_some() } else { c.lower.is_some() }) {
        let vals = children.iter().map(|c| if sup { c.upper.clone().unwrap() } else { c.lower.clone().unwrap() });
        vals.reduce(|a, b| if sup { q_max(&a, &b) } else { q_min(&a, &b) })
    } else {
        None
    };
    let chosen = certified.as_ref().map_or(by_estimate.0, |(i, _)| *i);
    let mut path = vec![indices[chosen]];
    path.extend(children[chosen].path.iter().copied());
    let slack = children.iter().map(|c| c.slack.clone()).max().unwrap_or_else(Q::zero);
    let examined = children.iter().map(|c| c.examined).sum::<u64>() + children.len() as u64;
    let (lower, upper) = if sup {
        (certified.map(|(_, v)| v), other)
    } else {
        (other, certified.map(|(_, v)| v))
    };
    let mut estimate = by_estimate.1;
    if let Some(l) = &lower {
        estimate = q_max(&estimate, l);
    }
    if let Some(u) = &upper {
        estimate = q_min(&estimate, u);
    }
    Node {
        lower,
        upper,
        estimate,
        path,
        slack,
        examined,
    }
}

fn run<S: Structure + ?Sized>(
    sigma: &Formula,
    s: &S,
    budget: &EvalBudget,
    pinned: Option<&[u64]>,
) -> Result<EvalResult, EvalError> {
    if !sigma.is_sentence() {
        return Err(EvalError::NotClosed);
    }
    sigma.check(&s.signature())?;
    let p = prenex(sigma);
    let (prefix, matrix) = split_prenex(&p)?;
    if let Some(pin) = pinned {
        assert_eq!(pin.len(), prefix.len(), "one pinned point per quantifier");
    }
    let search = Search {
        s,
        prefix: &prefix,
        matrix: &matrix,
        budget,
        atom_k: atom_precision(budget.k, atom_count(&matrix)),
        pinned,
    };
    let node = search.block(0, &Vec::new())?;
    let witnesses = prefix
        .iter()
        .zip(&node.path)
        .enumerate()
        .map(|(position, ((q, x), &point))| Witness {
            position,
            quantifier: *q,
            var: x.clone(),
            point,
            description: s.describe_point(point),
        })
        .collect();
    Ok(EvalResult {
        certified_lower: node.lower,
        certified_upper: node.upper,
        estimate: node.estimate,
        witnesses,
        slack: node.slack,
        points_examined: node.examined,
    })
}

/// Evaluates a sentence after prenex normalization, searching the first
/// `budget.points` points for each quantifier (all points of a finite
/// structure). Results depend only on the inputs.
pub fn eval<S: Structure + ?Sized>(sigma: &Formula, s: &S, budget: &EvalBudget) -> Result<EvalResult, EvalError> {
    run(sigma, s, budget, None)
}

/// As `eval` with every prenex quantifier fixed to the given point.
pub fn eval_pinned<S: Structure + ?Sized>(
    sigma: &Formula,
    s: &S,
    k: u32,
    points: &[u64],
) -> Result<EvalResult, EvalError> {
    run(sigma, s, &EvalBudget::new(1, k), Some(points))
}

/// Exact value on a finite test structure by exhaustive search over the
/// formula as written (no prenex step).
pub fn eval_exact(sigma: &Formula, t: &TestStructure) -> Result<Q, EvalError> {
    if !sigma.is_sentence() {
        return Err(EvalError::NotClosed);
    }
    sigma.check(&t.signature())?;
    exact(sigma, t, &mut Vec::new())
}

fn exact(phi: &Formula, t: &TestStructure, env: &mut Vec<(String, usize)>) -> Result<Q, EvalError> {
    let point = |term: &Term, env: &Vec<(String, usize)>| -> Result<usize, EvalError> {
        match term {
            Term::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, p)| *p)
                .ok_or(EvalError::NotClosed),
            Term::Fresh(i) => t.binding(*i),
            other => Err(EvalError::UnknownSymbol(format!("{other:?}"))),
        }
    };
    Ok(match phi {
        Formula::Atomic(p, args) => match p.as_str() {
            "bot" => Q::zero(),
            "d" => t.distance(point(&args[0], env)?, point(&args[1], env)?).clone(),
            other => return Err(EvalError::UnknownSymbol(other.into())),
        },
        Formula::Zero(_) => Q::zero(),
        Formula::One(_) => Q::one(),
        Formula::Half(a) => exact(a, t, env)? / Q::from_integer(2.into()),
        Formula::DotMinus(a, b) => crate::numeric::dot_minus(&exact(a, t, env)?, &exact(b, t, env)?),
        Formula::Sup(x, a) | Formula::Inf(x, a) => {
            let mut best: Option<Q> = None;
            for i in 0..t.len() {
                env.push((x.clone(), i));
                let v = exact(a, t, env);
                env.pop();
                let v = v?;
                best = Some(match best {
                    None => v,
                    Some(b) if matches!(phi, Formula::Sup(..)) => q_max(&b, &v),
                    Some(b) => q_min(&b, &v),
                });
            }
            best.expect("test structures are nonempty")
        }
    })
}

#[cfg(test)]
mod tests;
