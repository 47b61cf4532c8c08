//! The forcing game: players alternately extend a condition, `∀` first.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Bound, BoundRecord, CompiledSpace, Condition, ConsistencyOracle, ForcingError};
use crate::coding::{decode, encode, GodelCode};
use crate::formula::{Formula, Signature, Term};
use crate::numeric::{fmt_exact, parse_exact, pow2_neg, q_max, q_min, Q};
use crate::parser::print_formula;

/// Transcript record format version.
pub const TRANSCRIPT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Forall,
    Exists,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Forall => "forall",
            Player::Exists => "exists",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub player: Player,
    pub condition: Condition,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub moves: Vec<Move>,
}

impl Transcript {
    pub fn last(&self) -> Condition {
        self.moves.last().map(|m| m.condition.clone()).unwrap_or_default()
    }

    pub fn rounds(&self) -> usize {
        self.moves.len()
    }

    /// One JSON object per line: a header, then one line per move.
    pub fn to_jsonl(&self) -> String {
        let sig = Signature::metric();
        let mut out = serde_json::json!({
            "schema": TRANSCRIPT_SCHEMA,
            "kind": "transcript",
            "rounds": self.moves.len(),
        })
        .to_string();
        out.push('\n');
        for (i, m) in self.moves.iter().enumerate() {
            let bounds: Vec<BoundRecord> = m
                .condition
                .bounds
                .iter()
                .map(|b| BoundRecord {
                    formula: print_formula(&b.phi),
                    code: encode(&b.phi, &sig).expect("metric sentences are codable").to_string(),
                    r: fmt_exact(&b.r),
                })
                .collect();
            let line = serde_json::json!({
                "round": i + 1,
                "player": m.player,
                "bounds": bounds,
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// Reads `Transcript::to_jsonl` output; sentence codes are authoritative.
pub fn transcript_from_jsonl(text: &str) -> Result<Transcript, ForcingError> {
    let sig = Signature::metric();
    let bad = |line: usize, message: &str| ForcingError::BadTranscript {
        line,
        message: message.into(),
    };
    let mut moves = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| bad(n + 1, &e.to_string()))?;
        let player = match v["player"].as_str() {
            Some("forall") => Player::Forall,
            Some("exists") => Player::Exists,
            _ => return Err(bad(n + 1, "missing player")),
        };
        let mut bounds = Vec::new();
        for b in v["bounds"].as_array().ok_or_else(|| bad(n + 1, "missing bounds"))? {
            let code: GodelCode = b["code"]
                .as_str()
                .ok_or_else(|| bad(n + 1, "missing code"))?
                .parse()
                .map_err(|_| bad(n + 1, "bad code"))?;
            let phi = decode(&code, &sig).map_err(|e| bad(n + 1, &e.to_string()))?;
            let r = b["r"]
                .as_str()
                .and_then(parse_exact)
                .ok_or_else(|| bad(n + 1, "bad threshold"))?;
            bounds.push(Bound::new(phi, r)?);
        }
        moves.push(Move {
            player,
            condition: Condition::from_bounds(bounds),
        });
    }
    Ok(Transcript { moves })
}

/// A player's rule for extending the current condition.
pub trait Strategy {
    fn name(&self) -> String;
    fn play(
        &mut self,
        me: Player,
        history: &Transcript,
        oracle: &dyn ConsistencyOracle,
    ) -> Result<Condition, ForcingError>;
}

/// `d(c_m, c_m) < 1` for the next unused constant `c_m`.
fn trivial_bound(p: &Condition) -> Bound {
    let m = p.max_constant() + 1;
    Bound::new(Formula::d(Term::c(m), Term::c(m)), Q::one()).expect("valid bound")
}

/// Repeats the previous condition plus one trivially true bound on a new
/// constant.
#[derive(Clone, Debug, Default)]
pub struct PassThrough;

impl Strategy for PassThrough {
    fn name(&self) -> String {
        "pass".into()
    }

    fn play(&mut self, _: Player, h: &Transcript, _: &dyn ConsistencyOracle) -> Result<Condition, ForcingError> {
        let p = h.last();
        Ok(p.with(trivial_bound(&p)))
    }
}

/// Adds the bounds listed for each of its turns, then passes.
#[derive(Clone, Debug, Default)]
pub struct Scripted {
    pub turns: Vec<Vec<Bound>>,
    next: usize,
}

impl Scripted {
    pub fn new(turns: Vec<Vec<Bound>>) -> Self {
        Scripted { turns, next: 0 }
    }
}

impl Strategy for Scripted {
    fn name(&self) -> String {
        "script".into()
    }

    fn play(&mut self, _: Player, h: &Transcript, _: &dyn ConsistencyOracle) -> Result<Condition, ForcingError> {
        let mut p = h.last();
        match self.turns.get(self.next) {
            Some(bs) => {
                for b in bs {
                    p = p.with(b.clone());
                }
            }
            None => p = p.with(trivial_bound(&p)),
        }
        self.next += 1;
        Ok(p)
    }
}

/// Adds one random consistent bound over `c1..c_max` per turn.
#[derive(Clone, Debug)]
pub struct RandomForall {
    rng: ChaCha8Rng,
    pub seed: u64,
    pub max_constant: u32,
}

impl RandomForall {
    pub fn new(seed: u64) -> Self {
        RandomForall {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            max_constant: 4,
        }
    }

    fn candidate(&mut self) -> Bound {
        let n = self.max_constant;
        let i = self.rng.gen_range(1..=n);
        let mut j = self.rng.gen_range(1..=n);
        if j == i {
            j = i % n + 1;
        }
        let k = self.rng.gen_range(1..=n);
        let d = |a: u32, b: u32| Formula::d(Term::c(a), Term::c(b));
        let phi = match self.rng.gen_range(0..4) {
            0 => d(i, j),
            1 => Formula::dm(Formula::one(), d(i, j)),
            2 => Formula::half(d(i, j)),
            _ => Formula::dm(d(i, j), d(j, k)),
        };
        let r = Q::new(self.rng.gen_range(1..=8).into(), 8.into());
        Bound::new(phi, r).expect("valid bound")
    }
}

impl Strategy for RandomForall {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn play(&mut self, _: Player, h: &Transcript, oracle: &dyn ConsistencyOracle) -> Result<Condition, ForcingError> {
        let p = h.last();
        for _ in 0..16 {
            let q = p.with(self.candidate());
            if q != p && oracle.is_condition(&q)? {
                return Ok(q);
            }
        }
        Ok(p.with(trivial_bound(&p)))
    }
}

/// `∃` pins every mentioned distance into an interval of width
/// `2^-round` around a model of the current condition. The pins stand in
/// for definitive plays, which need infinitely many rounds.
#[derive(Clone, Debug, Default)]
pub struct ExistsUniversal {
    /// Current pin `(lo, hi)` per pair of constants.
    pub pins: BTreeMap<(u32, u32), (Q, Q)>,
    /// Pins after each of this player's turns.
    pub history: Vec<BTreeMap<(u32, u32), (Q, Q)>>,
}

pub fn exists_strategy_universal() -> ExistsUniversal {
    ExistsUniversal::default()
}

impl Strategy for ExistsUniversal {
    fn name(&self) -> String {
        "universal".into()
    }

    fn play(&mut self, _: Player, h: &Transcript, oracle: &dyn ConsistencyOracle) -> Result<Condition, ForcingError> {
        let round = h.rounds() as u32 + 1;
        let p = h.last();
        let space = oracle.witness(&p)?.ok_or(ForcingError::Infeasible)?;
        let g = pow2_neg(round + 2);
        let mut q = p.clone();
        let consts = space.index.consts.clone();
        for (ai, &a) in consts.iter().enumerate() {
            for &b in &consts[ai + 1..] {
                let v = space.distance(a, b).expect("indexed");
                let steps = (&v / &g).floor();
                let mut lo = steps * &g - &g;
                let mut hi = &lo + &g * Q::from_integer(4.into());
                if let Some((plo, phi)) = self.pins.get(&(a, b)) {
                    lo = q_max(&lo, plo);
                    hi = q_min(&hi, phi);
                }
                let d = Formula::d(Term::c(a), Term::c(b));
                q = q.with(Bound::new(d.clone(), hi.clone())?);
                if lo > Q::zero() {
                    q = q.with(Bound::new(Formula::dm(Formula::one(), d), Q::one() - &lo)?);
                }
                self.pins.insert((a, b), (lo, hi));
            }
        }
        self.history.push(self.pins.clone());
        Ok(q)
    }
}

/// Plays `rounds` moves, `∀` first, checking every move.
pub fn play_game(
    forall: &mut dyn Strategy,
    exists: &mut dyn Strategy,
    rounds: usize,
    oracle: &dyn ConsistencyOracle,
) -> Result<Transcript, ForcingError> {
    let mut t = Transcript::default();
    for m in 0..rounds {
        let player = if m % 2 == 0 { Player::Forall } else { Player::Exists };
        let strategy: &mut dyn Strategy = if player == Player::Forall { forall } else { exists };
        let illegal = |reason: String| ForcingError::IllegalMove { player, reason };
        let next = strategy.play(player, &t, oracle)?;
        if let Err(e) = next.validate() {
            return Err(illegal(e.to_string()));
        }
        if !next.extends(&t.last()) {
            return Err(illegal("does not extend the previous condition".into()));
        }
        if !oracle.is_condition(&next)? {
            return Err(illegal(format!("{next} is not satisfiable")));
        }
        t.moves.push(Move {
            player,
            condition: next,
        });
    }
    Ok(t)
}

/// The model of the final condition picked by the oracle (the lexicographically
/// least point of the first feasible cell for `MetricInstance`).
pub fn compile(t: &Transcript, oracle: &dyn ConsistencyOracle) -> Result<CompiledSpace, ForcingError> {
    if t.moves.is_empty() {
        return Ok(CompiledSpace::empty());
    }
    oracle.witness(&t.last())?.ok_or(ForcingError::Infeasible)
}
