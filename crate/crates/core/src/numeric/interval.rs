use num_traits::{Signed, Zero};

use super::{dot_minus, fmt_exact, q, Q};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn midpoint(&self) -> Q {
        (&self.lo + &self.hi) / q(2, 1)
    }

    pub fn half(&self) -> Interval {
        Interval::new(&self.lo / q(2, 1), &self.hi / q(2, 1))
    }

    /// Interval image of `x ∸ y` (monotone in x, antitone in y).
    pub fn dot_minus(&self, other: &Interval) -> Interval {
        Interval::new(dot_minus(&self.lo, &other.hi), dot_minus(&self.hi, &other.lo))
    }

    pub fn clamp_nonneg(self) -> Interval {
        let lo = if self.lo.is_negative() { Q::zero() } else { self.lo };
        let hi = if self.hi.is_negative() { Q::zero() } else { self.hi };
        Interval { lo, hi }
    }

    pub fn to_text(&self) -> String {
        format!("[{}, {}]", fmt_exact(&self.lo), fmt_exact(&self.hi))
    }
}
