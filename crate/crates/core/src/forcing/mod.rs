//! Finite forcing over the theory of metric spaces of diameter at most 1:
//! conditions, the finite slices of `p^$`, the game engine, compiled
//! structures and forcing checks. Consistency of a condition is decided
//! exactly by `MetricInstance`.

mod forces;
mod game;
mod pl;
mod solver;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, Signature};
use crate::numeric::{ceil_dyadic, fmt_exact, is_dyadic, pow2_neg, Q};
use crate::parser::print_formula;

pub use forces::{fp_estimate, forces_sup_leq, FpEstimate, ForcingAnswer, NoWitness};
pub use game::{
    compile, exists_strategy_universal, play_game, transcript_from_jsonl, ExistsUniversal, Move,
    PassThrough, Player, RandomForall, Scripted, Strategy, Transcript,
};
pub use pl::{pl_form, pl_value, Lin, PairIndex, PlForm};
pub use solver::{is_pseudometric, Cell, Objective, Region, Search, Sense, Work, DEFAULT_LP_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("symbol `{0}` is outside the metric signature")]
    NonMetricSignature(String),
    #[error("constant c{0} is not indexed")]
    UnknownConstant(u32),
    #[error("quantifier where a quantifier-free formula is required")]
    NotQuantifierFree,
    #[error("bound `{0}` is not a quantifier-free sentence with a positive dyadic threshold")]
    BadBound(String),
    #[error("{player} made an illegal move: {reason}")]
    IllegalMove { player: Player, reason: String },
    #[error("no feasible assignment")]
    Infeasible,
    #[error("solver budget exhausted")]
    BudgetExhausted,
    #[error("bad transcript line {line}: {message}")]
    BadTranscript { line: usize, message: String },
}

/// A strict bound `φ < r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bound {
    pub phi: Formula,
    pub r: Q,
}

impl Bound {
    pub fn new(phi: Formula, r: Q) -> Result<Bound, ForcingError> {
        let b = Bound { phi, r };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), ForcingError> {
        let ok = self.phi.is_sentence()
            && self.phi.is_quantifier_free()
            && self.phi.check(&Signature::metric()).is_ok()
            && self.r > Q::zero()
            && is_dyadic(&self.r);
        if ok {
            Ok(())
        } else {
            Err(ForcingError::BadBound(self.to_string()))
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} < {}", print_formula(&self.phi), fmt_exact(&self.r))
    }
}

/// Finite set of strict bounds; canonical by set order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Condition {
    pub bounds: BTreeSet<Bound>,
}

impl Condition {
    pub fn empty() -> Self {
        Condition::default()
    }

    pub fn from_bounds(bounds: impl IntoIterator<Item = Bound>) -> Self {
        Condition {
            bounds: bounds.into_iter().collect(),
        }
    }

    pub fn with(&self, b: Bound) -> Self {
        let mut c = self.clone();
        c.bounds.insert(b);
        c
    }

    pub fn extends(&self, other: &Condition) -> bool {
        other.bounds.is_subset(&self.bounds)
    }

    pub fn constants(&self) -> BTreeSet<u32> {
        self.bounds.iter().flat_map(|b| b.phi.fresh_constants()).collect()
    }

    pub fn max_constant(&self) -> u32 {
        self.constants().into_iter().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), ForcingError> {
        self.bounds.iter().try_for_each(Bound::validate)
    }

    /// The region `{φ_i < r_i}` over the given constants.
    pub fn region(&self, index: PairIndex) -> Result<Region, ForcingError> {
        let mut region = Region::new(index);
        for b in &self.bounds {
            let f = pl_form(&b.phi, &region.index)?;
            region.push(f.upper, Sense::Below(b.r.clone()));
        }
        Ok(region)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bounds.iter().map(Bound::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Finite rational pseudometric on named constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledSpace {
    pub index: PairIndex,
    /// Pair distances in `PairIndex` variable order.
    pub dist: Vec<Q>,
}

impl CompiledSpace {
    pub fn empty() -> Self {
        CompiledSpace {
            index: PairIndex::new([]),
            dist: Vec::new(),
        }
    }

    pub fn distance(&self, a: u32, b: u32) -> Option<Q> {
        let (i, j) = (self.index.position(a)?, self.index.position(b)?);
        Some(if i == j {
            Q::zero()
        } else {
            self.dist[self.index.var(i, j)].clone()
        })
    }

    pub fn value(&self, phi: &Formula) -> Result<Q, ForcingError> {
        pl_value(phi, &self.index, &self.dist)
    }

    /// Every bound holds strictly.
    pub fn satisfies(&self, p: &Condition) -> bool {
        p.bounds
            .iter()
            .all(|b| self.value(&b.phi).map_or(false, |v| v < b.r))
    }

    pub fn is_pseudometric(&self) -> bool {
        is_pseudometric(&self.index, &self.dist)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: BTreeMap<String, String> = self
            .index
            .pairs()
            .into_iter()
            .zip(&self.dist)
            .map(|((a, b), v)| {
                (
                    format!("c{},c{}", self.index.consts[a], self.index.consts[b]),
                    fmt_exact(v),
                )
            })
            .collect();
        serde_json::json!({ "constants": self.index.consts, "distances": pairs })
    }
}

/// Decides conditions and produces models for them.
pub trait ConsistencyOracle {
    fn is_condition(&self, p: &Condition) -> Result<bool, ForcingError>;
    /// A model of `p`, deterministic in `p`.
    fn witness(&self, p: &Condition) -> Result<Option<CompiledSpace>, ForcingError>;
}

/// Bounded metric spaces with an exact LP-based decision procedure.
#[derive(Clone, Debug)]
pub struct MetricInstance {
    pub lp_budget: usize,
}

impl Default for MetricInstance {
    fn default() -> Self {
        MetricInstance {
            lp_budget: DEFAULT_LP_BUDGET,
        }
    }
}

impl MetricInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn work(&self) -> Work {
        Work::new(self.lp_budget)
    }

    /// Lexicographically least model in the first strictly feasible cell,
    /// with every bound kept at least half the best margin away.
    pub fn model_of(&self, region: &Region, work: &mut Work) -> Result<Option<(Cell, Vec<Q>)>, ForcingError> {
        match region.strict_search(work) {
            Search::Infeasible => Ok(None),
            Search::Exhausted => Err(ForcingError::BudgetExhausted),
            Search::Feasible(cell) => {
                let half = &cell.margin / Q::from_integer(2.into());
                let x = region
                    .lexmin(&cell.choice, &half, work)
                    .ok_or(ForcingError::BudgetExhausted)?;
                Ok(Some((cell, x)))
            }
        }
    }
}

impl ConsistencyOracle for MetricInstance {
    fn is_condition(&self, p: &Condition) -> Result<bool, ForcingError> {
        p.validate()?;
        let region = p.region(PairIndex::new(p.constants()))?;
        match region.strict_search(&mut self.work()) {
            Search::Feasible(_) => Ok(true),
            Search::Infeasible => Ok(false),
            Search::Exhausted => Err(ForcingError::BudgetExhausted),
        }
    }

    fn witness(&self, p: &Condition) -> Result<Option<CompiledSpace>, ForcingError> {
        p.validate()?;
        let index = PairIndex::new(p.constants());
        let region = p.region(index.clone())?;
        Ok(self
            .model_of(&region, &mut self.work())?
            .map(|(_, dist)| CompiledSpace { index, dist }))
    }
}

/// The slice of `p^$` at granularity `g`: all `max_i (φ_i ∸ s_i)` with
/// `s_i ∈ 2^-g ℤ`, `0 <= s_i < r_i`. The whole family is the union over
/// `g`; `∅` gives the single formula `Zero(bot)`.
pub fn dollar(p: &Condition, g: u32) -> Vec<Formula> {
    assert!(g >= 1, "granularity starts at 1");
    let step = pow2_neg(g);
    let grids: Vec<Vec<Q>> = p
        .bounds
        .iter()
        .map(|b| {
            let mut pts = Vec::new();
            let mut s = Q::zero();
            while s < b.r && s <= Q::one() {
                pts.push(s.clone());
                s += &step;
            }
            pts
        })
        .collect();
    if grids.is_empty() {
        return vec![Formula::zero()];
    }
    let bounds: Vec<&Bound> = p.bounds.iter().collect();
    let mut out = Vec::new();
    let mut counter = vec![0usize; grids.len()];
    if grids.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let mut theta: Option<Formula> = None;
        for (i, b) in bounds.iter().enumerate() {
            let s = Formula::dyadic_constant(&grids[i][counter[i]]).expect("grid points are dyadic");
            let term = Formula::dm(b.phi.clone(), s);
            theta = Some(match theta {
                None => term,
                Some(t) => Formula::max(t, term),
            });
        }
        out.push(theta.expect("nonempty condition"));
        let mut i = 0;
        loop {
            if i == counter.len() {
                return out;
            }
            counter[i] += 1;
            if counter[i] < grids[i].len() {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Smallest `g <= gmax` with a `θ ∈ dollar(p, g)` vanishing on `space`,
/// together with that `θ`.
pub fn dollar_witness(p: &Condition, space: &CompiledSpace, gmax: u32) -> Option<(u32, Formula)> {
    'g: for g in 1..=gmax {
        let mut theta: Option<Formula> = None;
        for b in &p.bounds {
            let v = space.value(&b.phi).ok()?;
            let s = ceil_dyadic(&v, g);
            if s >= b.r {
                continue 'g;
            }
            let term = Formula::dm(b.phi.clone(), Formula::dyadic_constant(&s)?);
            theta = Some(match theta {
                None => term,
                Some(t) => Formula::max(t, term),
            });
        }
        return Some((g, theta.unwrap_or_else(Formula::zero)));
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRecord {
    pub formula: String,
    pub code: String,
    pub r: String,
}

#[cfg(test)]
mod tests;
