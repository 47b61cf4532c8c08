//! Presentations: enumerated rational points over special points, plus a
//! norm oracle with an explicit certification mode.
//!
//! Rational point `i` is read as `tag = i % 4`, `rest = i / 4`:
//!
//! * `0`: special point `rest`;
//! * `1`: adjoint of point `rest`;
//! * `2`: product of points `a`, `b` with `(a, b) = cantor_unpair(rest)`;
//! * `3`: rounded combination `λ·p_a + μ·p_b`, with
//!   `(c, r) = cantor_unpair(rest)`, `(a, b) = cantor_unpair(r)`,
//!   `(s, t) = cantor_unpair(c)`, `λ = gauss_rational_at(s)`,
//!   `μ = gauss_rational_at(t)`; when `|λ| + |μ| > 1` both are divided
//!   by `(|Re λ| + |Im λ|) + (|Re μ| + |Im μ|)`.
//!
//! So the product of points `i` and `j` is point `4·cantor_pair(i, j) + 2`.

mod cantor;
mod groups;
mod matrices;
mod torus;

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Signature;
use crate::group::GroupError;
use crate::matrix::MatrixError;
use crate::numeric::{cantor_pair, cantor_unpair, fmt_exact, gauss_rational_at, GaussQ, Interval, Q};

pub use cantor::{C2wPresentation, LocallyConstant, MAX_CYLINDER_DEPTH};
pub use groups::{CstarLambdaPresentation, GroupVnaPresentation};
pub use matrices::{RPresentation, R_MAX_SQUARINGS};
pub use torus::torus_sup_norm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("special point {0} is beyond the supported size")]
    TooLarge(u64),
    #[error("two-sided query on a lower-only presentation")]
    ModeMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificationMode {
    TwoSided,
    LowerOnly,
}

/// Answer of a norm oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormReport {
    /// The norm lies in `[lo, hi]`.
    TwoSided { lo: Q, hi: Q },
    /// `lower <= norm <= global_upper`; `lower` is sound but may be far.
    LowerOnly { lower: Q, global_upper: Q },
}

impl NormReport {
    pub fn interval(&self) -> Interval {
        match self {
            NormReport::TwoSided { lo, hi } => Interval::new(lo.clone(), hi.clone()),
            NormReport::LowerOnly { lower, global_upper } => {
                Interval::new(lower.clone(), global_upper.clone())
            }
        }
    }

    pub fn is_two_sided(&self) -> bool {
        matches!(self, NormReport::TwoSided { .. })
    }

    /// The two-sided interval, or `ModeMismatch`.
    pub fn two_sided(&self) -> Result<Interval, PresentationError> {
        match self {
            NormReport::TwoSided { lo, hi } => Ok(Interval::new(lo.clone(), hi.clone())),
            NormReport::LowerOnly { .. } => Err(PresentationError::ModeMismatch),
        }
    }
}

impl fmt::Display for NormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormReport::TwoSided { lo, hi } => write!(f, "[{}, {}]", fmt_exact(lo), fmt_exact(hi)),
            NormReport::LowerOnly { lower, global_upper } => {
                write!(f, ">= {} (<= {})", fmt_exact(lower), fmt_exact(global_upper))
            }
        }
    }
}

/// A separable structure together with a generating sequence and a norm
/// oracle. Special points lie in the unit ball.
pub trait Presentation: Send + Sync {
    type Elem: Clone + Send + Sync;

    fn name(&self) -> String;
    fn mode(&self) -> CertificationMode;
    fn signature(&self) -> Signature;
    fn special_point(&self, n: u64) -> Result<Self::Elem, PresentationError>;
    fn unit(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, PresentationError>;
    fn adjoint(&self, a: &Self::Elem) -> Self::Elem;
    fn combine(
        &self,
        l: &GaussQ,
        a: &Self::Elem,
        m: &GaussQ,
        b: &Self::Elem,
    ) -> Result<Self::Elem, PresentationError>;
    /// Norm of `a` to precision `2^-k`; `budget` bounds any search.
    fn norm(&self, a: &Self::Elem, k: u32, budget: usize) -> NormReport;
    /// Exact trace, for tracial structures.
    fn trace(&self, _a: &Self::Elem) -> Option<GaussQ> {
        None
    }
    fn describe(&self, a: &Self::Elem) -> String;
}

/// Closed term over special points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointTerm {
    Special(u64),
    Adj(Arc<PointTerm>),
    Mul(Arc<PointTerm>, Arc<PointTerm>),
    Comb(GaussQ, Arc<PointTerm>, GaussQ, Arc<PointTerm>),
}

impl fmt::Display for PointTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointTerm::Special(n) => write!(f, "s{n}"),
            PointTerm::Adj(a) => write!(f, "adj({a})"),
            PointTerm::Mul(a, b) => write!(f, "mul({a}, {b})"),
            PointTerm::Comb(l, a, m, b) => write!(f, "comb({l}, {a}, {m}, {b})"),
        }
    }
}

/// Coefficients of a combination node, clipped into `|λ| + |μ| <= 1`.
pub fn combination_coefficients(c: u64) -> (GaussQ, GaussQ) {
    let (s, t) = cantor_unpair(c);
    let (l, m) = (gauss_rational_at(s), gauss_rational_at(t));
    if GaussQ::rounded_pair_ok(&l, &m) {
        return (l, m);
    }
    let total = l.modulus_upper() + m.modulus_upper();
    let inv = total.recip();
    (l.scale(&inv), m.scale(&inv))
}

pub fn rational_point(index: u64) -> PointTerm {
    let (tag, rest) = (index % 4, index / 4);
    match tag {
        0 => PointTerm::Special(rest),
        1 => PointTerm::Adj(Arc::new(rational_point(rest))),
        2 => {
            let (a, b) = cantor_unpair(rest);
            PointTerm::Mul(Arc::new(rational_point(a)), Arc::new(rational_point(b)))
        }
        _ => {
            let (c, r) = cantor_unpair(rest);
            let (a, b) = cantor_unpair(r);
            let (l, m) = combination_coefficients(c);
            PointTerm::Comb(l, Arc::new(rational_point(a)), m, Arc::new(rational_point(b)))
        }
    }
}

/// Index of the product of points `i` and `j`.
pub fn product_index(i: u64, j: u64) -> u64 {
    4 * cantor_pair(i, j) + 2
}

pub fn evaluate_point<P: Presentation + ?Sized>(
    p: &P,
    t: &PointTerm,
) -> Result<P::Elem, PresentationError> {
    match t {
        PointTerm::Special(n) => p.special_point(*n),
        PointTerm::Adj(a) => Ok(p.adjoint(&evaluate_point(p, a)?)),
        PointTerm::Mul(a, b) => p.mul(&evaluate_point(p, a)?, &evaluate_point(p, b)?),
        PointTerm::Comb(l, a, m, b) => {
            p.combine(l, &evaluate_point(p, a)?, m, &evaluate_point(p, b)?)
        }
    }
}

/// Every combination node satisfies the rounded bound.
pub fn rounded_bound_holds(t: &PointTerm) -> bool {
    match t {
        PointTerm::Special(_) => true,
        PointTerm::Adj(a) => rounded_bound_holds(a),
        PointTerm::Mul(a, b) => rounded_bound_holds(a) && rounded_bound_holds(b),
        PointTerm::Comb(l, a, m, b) => {
            GaussQ::rounded_pair_ok(l, m) && rounded_bound_holds(a) && rounded_bound_holds(b)
        }
    }
}

/// `x / max(s, 1)`, the shared unit-ball normalization.
pub(crate) fn shrink_factor(s: &Q) -> Q {
    if *s > Q::one() {
        s.recip()
    } else {
        Q::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_is_closed_and_bounded() {
        for i in 0..=20u64 {
            for j in 0..=20u64 {
                let k = product_index(i, j);
                assert!(k <= product_index(20, 20));
                assert_eq!(
                    rational_point(k),
                    PointTerm::Mul(Arc::new(rational_point(i)), Arc::new(rational_point(j)))
                );
            }
        }
        assert_eq!(product_index(20, 20), 3362);
        assert_eq!(rational_point(0), PointTerm::Special(0));
        for i in 0..2000 {
            assert!(rounded_bound_holds(&rational_point(i)));
        }
    }
}
