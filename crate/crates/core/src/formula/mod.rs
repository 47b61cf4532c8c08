//! Restricted continuous-logic formulas: terms, the connective basis
//! `0, 1, x/2, ∸`, the quantifiers `sup`/`inf`, prenex normalization,
//! prefix classes, and moduli of uniform continuity.

mod modulus;
mod prenex;
mod random;
mod signature;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

pub use modulus::{modulus_of, Modulus};
pub use random::{random_formula, random_prenex_sentence, random_rounded_pair, RandomFormulaConfig};
pub use prenex::{classify_prefix, prenex, split_prenex, PrefixClass, Quantifier};
pub use signature::{
    fresh_index, ConstantSymbol, FunctionSymbol, PredicateSymbol, Preset, Signature,
    SymbolModulus, BOT,
};

use crate::numeric::{GaussQ, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("rounded combination violates |λ|+|μ| <= 1: {0}, {1}")]
    RoundedBoundViolation(GaussQ, GaussQ),
    #[error("rounded combinations are not terms of this signature")]
    CombinationNotAllowed,
    #[error("quantifier below a connective")]
    NotPrenex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Fresh constant `c_i`, `i >= 1`.
    Fresh(u32),
    /// Constant symbol of the signature.
    Named(String),
    App(String, Vec<Term>),
    /// Rounded combination `λ·t + μ·s`.
    Comb(GaussQ, Box<Term>, GaussQ, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atomic(String, Vec<Term>),
    Zero(Box<Formula>),
    One(Box<Formula>),
    Half(Box<Formula>),
    DotMinus(Box<Formula>, Box<Formula>),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn c(i: u32) -> Term {
        assert!(i >= 1, "fresh constants start at c1");
        Term::Fresh(i)
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Fresh(_) | Term::Named(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_free(out)),
            Term::Comb(_, a, _, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
        }
    }

    pub fn has_var(&self, x: &str) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Fresh(_) | Term::Named(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.has_var(x)),
            Term::Comb(_, a, _, b) => a.has_var(x) || b.has_var(x),
        }
    }

    pub fn substitute(&self, x: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => by.clone(),
            Term::Var(_) | Term::Fresh(_) | Term::Named(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(x, by)).collect())
            }
            Term::Comb(l, a, m, b) => Term::Comb(
                l.clone(),
                Box::new(a.substitute(x, by)),
                m.clone(),
                Box::new(b.substitute(x, by)),
            ),
        }
    }

    fn collect_fresh(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Fresh(i) => {
                out.insert(*i);
            }
            Term::Var(_) | Term::Named(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_fresh(out)),
            Term::Comb(_, a, _, b) => {
                a.collect_fresh(out);
                b.collect_fresh(out);
            }
        }
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Fresh(_) | Term::Named(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_names(out)),
            Term::Comb(_, a, _, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), FormulaError> {
        match self {
            Term::Var(_) | Term::Fresh(_) => Ok(()),
            Term::Named(n) => sig
                .constant(n)
                .map(|_| ())
                .ok_or_else(|| FormulaError::UnknownSymbol(n.clone())),
            Term::App(f, args) => {
                let sym = sig
                    .function(f)
                    .ok_or_else(|| FormulaError::UnknownSymbol(f.clone()))?;
                if sym.arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        name: f.clone(),
                        expected: sym.arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
            Term::Comb(l, a, m, b) => {
                if !sig.combinations {
                    return Err(FormulaError::CombinationNotAllowed);
                }
                if !GaussQ::rounded_pair_ok(l, m) {
                    return Err(FormulaError::RoundedBoundViolation(l.clone(), m.clone()));
                }
                a.check(sig)?;
                b.check(sig)
            }
        }
    }
}

impl Formula {
    /// The nullary placeholder atom (value 0).
    pub fn bot() -> Formula {
        Formula::Atomic(BOT.into(), vec![])
    }

    /// The constant 1, `One(bot)`.
    pub fn one() -> Formula {
        Formula::One(Box::new(Formula::bot()))
    }

    /// The constant 0, `Zero(bot)`.
    pub fn zero() -> Formula {
        Formula::Zero(Box::new(Formula::bot()))
    }

    /// The constant `2^-n`, canonically `Half^n(One(bot))`.
    pub fn pow2_neg(n: u32) -> Formula {
        (0..n).fold(Formula::one(), |f, _| Formula::half(f))
    }

    /// A dyadic constant `s ∈ [0, 1]` as a restricted formula: the binary
    /// digits of `s` are summed with the truncated sum
    /// `a ⊕ b = 1 ∸ ((1 ∸ a) ∸ b)`.
    pub fn dyadic_constant(s: &Q) -> Option<Formula> {
        if s < &Q::zero() || s > &Q::one() || !crate::numeric::is_dyadic(s) {
            return None;
        }
        if s.is_zero() {
            return Some(Formula::zero());
        }
        if s.is_one() {
            return Some(Formula::one());
        }
        let e = crate::numeric::dyadic_exponent(s).unwrap();
        let numer = s.numer().clone();
        let mut acc: Option<Formula> = None;
        for j in 1..=e {
            // bit j of the binary expansion 0.b1 b2 ... be
            let bit = (&numer >> (e - j) as usize) & num_bigint::BigInt::one();
            if bit.is_one() {
                let term = Formula::pow2_neg(j);
                acc = Some(match acc {
                    None => term,
                    Some(a) => Formula::truncated_sum(a, term),
                });
            }
        }
        acc
    }

    /// `min(1, a + b)` written as `1 ∸ ((1 ∸ a) ∸ b)`.
    pub fn truncated_sum(a: Formula, b: Formula) -> Formula {
        Formula::dm(Formula::one(), Formula::dm(Formula::dm(Formula::one(), a), b))
    }

    /// `max(a, b)` written as `1 ∸ ((1 ∸ a) ∸ (b ∸ a))`.
    pub fn max(a: Formula, b: Formula) -> Formula {
        let gap = Formula::dm(b, a.clone());
        Formula::dm(Formula::one(), Formula::dm(Formula::dm(Formula::one(), a), gap))
    }

    pub fn atomic(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atomic(p.to_string(), args)
    }

    pub fn d(a: Term, b: Term) -> Formula {
        Formula::Atomic("d".into(), vec![a, b])
    }

    pub fn dm(a: Formula, b: Formula) -> Formula {
        Formula::DotMinus(Box::new(a), Box::new(b))
    }

    pub fn half(a: Formula) -> Formula {
        Formula::Half(Box::new(a))
    }

    pub fn sup(x: &str, a: Formula) -> Formula {
        Formula::Sup(x.to_string(), Box::new(a))
    }

    pub fn inf(x: &str, a: Formula) -> Formula {
        Formula::Inf(x.to_string(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atomic(_, args) => args.iter().for_each(|a| a.collect_free(out)),
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.collect_free(out),
            Formula::DotMinus(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            Formula::Sup(x, body) | Formula::Inf(x, body) => {
                let mut inner = BTreeSet::new();
                body.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atomic(_, args) => args.iter().any(|a| a.has_var(x)),
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.has_free(x),
            Formula::DotMinus(a, b) => a.has_free(x) || b.has_free(x),
            Formula::Sup(y, body) | Formula::Inf(y, body) => y != x && body.has_free(x),
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atomic(_, args) => args.iter().for_each(|a| a.collect_names(out)),
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.collect_names(out),
            Formula::DotMinus(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            Formula::Sup(x, body) | Formula::Inf(x, body) => {
                out.insert(x.clone());
                body.collect_names(out);
            }
        }
    }

    /// Indices `i` of the fresh constants `c_i` occurring in the formula.
    pub fn fresh_constants(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_fresh(&mut out);
        out
    }

    fn collect_fresh(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Atomic(_, args) => args.iter().for_each(|a| a.collect_fresh(out)),
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.collect_fresh(out),
            Formula::DotMinus(a, b) => {
                a.collect_fresh(out);
                b.collect_fresh(out);
            }
            Formula::Sup(_, body) | Formula::Inf(_, body) => body.collect_fresh(out),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atomic(..) => true,
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.is_quantifier_free(),
            Formula::DotMinus(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Sup(..) | Formula::Inf(..) => false,
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atomic(..) => 0,
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => 1 + a.depth(),
            Formula::DotMinus(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Sup(_, a) | Formula::Inf(_, a) => 1 + a.depth(),
        }
    }

    /// Capture-free substitution of `by` for the free occurrences of `x`.
    /// `by` must not contain variables bound inside the formula.
    pub fn substitute(&self, x: &str, by: &Term) -> Formula {
        match self {
            Formula::Atomic(p, args) => {
                Formula::Atomic(p.clone(), args.iter().map(|a| a.substitute(x, by)).collect())
            }
            Formula::Zero(a) => Formula::Zero(Box::new(a.substitute(x, by))),
            Formula::One(a) => Formula::One(Box::new(a.substitute(x, by))),
            Formula::Half(a) => Formula::Half(Box::new(a.substitute(x, by))),
            Formula::DotMinus(a, b) => {
                Formula::dm(a.substitute(x, by), b.substitute(x, by))
            }
            Formula::Sup(y, _) | Formula::Inf(y, _) if y == x => self.clone(),
            Formula::Sup(y, body) => Formula::Sup(y.clone(), Box::new(body.substitute(x, by))),
            Formula::Inf(y, body) => Formula::Inf(y.clone(), Box::new(body.substitute(x, by))),
        }
    }

    /// Symbols registered, arities respected, rounded bounds satisfied.
    pub fn check(&self, sig: &Signature) -> Result<(), FormulaError> {
        match self {
            Formula::Atomic(p, args) => {
                let sym = sig
                    .predicate(p)
                    .ok_or_else(|| FormulaError::UnknownSymbol(p.clone()))?;
                if sym.arity != args.len() {
                    return Err(FormulaError::ArityMismatch {
                        name: p.clone(),
                        expected: sym.arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
            Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => a.check(sig),
            Formula::DotMinus(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::Sup(_, a) | Formula::Inf(_, a) => a.check(sig),
        }
    }
}
