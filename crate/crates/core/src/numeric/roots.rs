//! Certified real roots of nonnegative rationals.
//!
//! `floor(2^k · x^(1/n)) = floor(floor(x · 2^(kn))^(1/n))`, so every root
//! reduces to one integer n-th root of an exact integer.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, Signed, Zero};

use super::{pow2, Interval, Q};

fn scaled_floor(x: &Q, n: u32, k: u32) -> (BigUint, bool) {
    assert!(!x.is_negative(), "root of a negative rational");
    let scaled = x * Q::from_integer(pow2(k * n));
    let fl = scaled.floor().to_integer();
    let exact_int = scaled.is_integer();
    let fl = fl.to_biguint().expect("nonnegative");
    let m = fl.nth_root(n);
    let exact = exact_int && m.clone().pow(n) == fl;
    (m, exact)
}

/// Largest `m/2^k` with `(m/2^k)^n <= x`.
pub fn nth_root_floor(x: &Q, n: u32, k: u32) -> Q {
    let (m, _) = scaled_floor(x, n, k);
    Q::new(BigInt::from_biguint(Sign::Plus, m), pow2(k))
}

/// Smallest `m/2^k` with `(m/2^k)^n >= x`.
pub fn nth_root_ceil(x: &Q, n: u32, k: u32) -> Q {
    let (m, exact) = scaled_floor(x, n, k);
    let m = BigInt::from_biguint(Sign::Plus, m);
    if exact {
        Q::new(m, pow2(k))
    } else {
        Q::new(m + 1, pow2(k))
    }
}

/// Dyadic interval of width at most `2^-k` holding `x^(1/n)`; a point when
/// the root is exact at that grid.
pub fn nth_root_interval(x: &Q, n: u32, k: u32) -> Interval {
    if x.is_zero() {
        return Interval::point(Q::zero());
    }
    let (m, exact) = scaled_floor(x, n, k);
    let m = BigInt::from_biguint(Sign::Plus, m);
    let lo = Q::new(m.clone(), pow2(k));
    if exact {
        Interval::point(lo)
    } else {
        Interval::new(lo, Q::new(m + 1, pow2(k)))
    }
}

pub fn sqrt_interval(x: &Q, k: u32) -> Interval {
    nth_root_interval(x, 2, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{q, qi};

    #[test]
    fn sqrt_two_brackets() {
        for k in [0u32, 5, 20, 40] {
            let iv = sqrt_interval(&qi(2), k);
            assert!(&iv.lo * &iv.lo <= qi(2));
            assert!(&iv.hi * &iv.hi > qi(2));
            assert_eq!(iv.width(), crate::numeric::pow2_neg(k));
        }
    }

    #[test]
    fn exact_roots_collapse() {
        assert_eq!(sqrt_interval(&q(1, 4), 3), Interval::point(q(1, 2)));
        assert_eq!(nth_root_interval(&qi(1), 10, 20), Interval::point(qi(1)));
        assert_eq!(nth_root_ceil(&qi(1), 4, 8), qi(1));
        assert_eq!(sqrt_interval(&qi(0), 8), Interval::point(qi(0)));
    }

    #[test]
    fn root_of_252() {
        let lo = nth_root_floor(&qi(252), 10, 20);
        let hi = nth_root_ceil(&qi(252), 10, 20);
        assert!(crate::numeric::to_f64(&lo) <= 252f64.powf(0.1));
        assert!(crate::numeric::to_f64(&hi) >= 252f64.powf(0.1));
        assert_eq!(&hi - &lo, crate::numeric::pow2_neg(20));
    }
}
