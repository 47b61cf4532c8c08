use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{fmt_ratio, Q};

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussQ {
    pub re: Q,
    pub im: Q,
}

impl GaussQ {
    pub fn new(re: Q, im: Q) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Q) -> Self {
        GaussQ { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        GaussQ::default()
    }

    pub fn one() -> Self {
        GaussQ::real(Q::one())
    }

    pub fn i() -> Self {
        GaussQ::new(Q::zero(), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussQ::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, exact.
    pub fn modulus_sq(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Certified upper bound `|re| + |im| >= |z|`.
    pub fn modulus_upper(&self) -> Q {
        self.re.abs() + self.im.abs()
    }

    /// Certified lower bound `max(|re|, |im|) <= |z|`.
    pub fn modulus_lower(&self) -> Q {
        let (a, b) = (self.re.abs(), self.im.abs());
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        GaussQ::new(&self.re * s, &self.im * s)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.modulus_sq();
        Some(GaussQ::new(&self.re / &m, -&self.im / &m))
    }

    /// Decides `|a| + |b| <= 1` exactly, without square roots.
    pub fn rounded_pair_ok(a: &GaussQ, b: &GaussQ) -> bool {
        let x = a.modulus_sq();
        let y = b.modulus_sq();
        let slack = Q::one() - &x - &y;
        if slack.is_negative() {
            return false;
        }
        // sqrt(x) + sqrt(y) <= 1  <=>  2 sqrt(xy) <= 1 - x - y
        Q::from_integer(4.into()) * x * y <= &slack * &slack
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im = if self.im.is_negative() {
            format!("-{}i", fmt_ratio(&-self.im.clone()))
        } else {
            format!("+{}i", fmt_ratio(&self.im))
        };
        write!(f, "{}{}", fmt_ratio(&self.re), im)
    }
}

impl Serialize for GaussQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &GaussQ {
    type Output = GaussQ;
    fn add(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussQ {
    type Output = GaussQ;
    fn sub(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussQ {
    type Output = GaussQ;
    fn mul(self, o: &GaussQ) -> GaussQ {
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for GaussQ {
    type Output = GaussQ;
    fn add(self, o: GaussQ) -> GaussQ {
        &self + &o
    }
}

impl Mul for GaussQ {
    type Output = GaussQ;
    fn mul(self, o: GaussQ) -> GaussQ {
        &self * &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    #[test]
    fn rounded_bound_exact() {
        let h = GaussQ::real(q(1, 2));
        assert!(GaussQ::rounded_pair_ok(&h, &h));
        assert!(!GaussQ::rounded_pair_ok(&GaussQ::real(q(3, 4)), &h));
        // |3/5 + 4/5 i| = 1 exactly
        let unit = GaussQ::new(q(3, 5), q(4, 5));
        assert!(GaussQ::rounded_pair_ok(&unit, &GaussQ::zero()));
        assert!(!GaussQ::rounded_pair_ok(&unit, &GaussQ::real(q(1, 1000))));
        // |1/2+1/2 i| ~ 0.7071, plus 0.29 stays under 1
        let diag = GaussQ::new(q(1, 2), q(1, 2));
        assert!(GaussQ::rounded_pair_ok(&diag, &GaussQ::real(q(29, 100))));
        assert!(!GaussQ::rounded_pair_ok(&diag, &GaussQ::real(q(30, 100))));
    }

    #[test]
    fn display_form() {
        assert_eq!(GaussQ::new(q(3, 4), q(0, 1)).to_string(), "3/4+0i");
        assert_eq!(GaussQ::new(q(-1, 2), q(-1, 3)).to_string(), "-1/2-1/3i");
    }
}
