//! Exact arithmetic shared by every module: rationals, Gaussian rationals,
//! certified roots, rational intervals, and the pairing bijections used by
//! all documented enumerations.

mod enumerate;
mod gauss;
mod interval;
mod roots;

pub use enumerate::{
    cantor_pair, cantor_unpair, gauss_index, gauss_rational_at, list_decode, list_encode,
    rational_at, rational_index, tuple_rank, tuple_unrank,
};
pub use gauss::GaussQ;
pub use interval::Interval;
pub use roots::{nth_root_ceil, nth_root_floor, nth_root_interval, sqrt_interval};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `2^-k` as a rational.
pub fn pow2_neg(k: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// True when the reduced denominator is a power of two.
pub fn is_dyadic(x: &Q) -> bool {
    let d = x.denom();
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

/// Exponent `e` with denominator `2^e`, if dyadic.
pub fn dyadic_exponent(x: &Q) -> Option<u32> {
    if !is_dyadic(x) {
        return None;
    }
    Some(x.denom().bits() as u32 - 1)
}

/// Largest multiple of `2^-k` that is `<= x`.
pub fn floor_dyadic(x: &Q, k: u32) -> Q {
    let scaled = x * Q::from_integer(pow2(k));
    Q::new(scaled.floor().to_integer(), pow2(k))
}

/// Smallest multiple of `2^-k` that is `>= x`.
pub fn ceil_dyadic(x: &Q, k: u32) -> Q {
    let scaled = x * Q::from_integer(pow2(k));
    Q::new(scaled.ceil().to_integer(), pow2(k))
}

pub fn q_max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn q_min(a: &Q, b: &Q) -> Q {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `max(a - b, 0)`.
pub fn dot_minus(a: &Q, b: &Q) -> Q {
    if a > b {
        a - b
    } else {
        Q::zero()
    }
}

/// Exact text for a rational: finite decimal for dyadics, `a/b` otherwise.
pub fn fmt_exact(x: &Q) -> String {
    match dyadic_exponent(x) {
        Some(0) => x.numer().to_string(),
        Some(e) => {
            let scaled: BigInt = x.numer() * BigInt::from(5u8).pow(e);
            let neg = scaled.is_negative();
            let digits = scaled.abs().to_string();
            let e = e as usize;
            let padded = if digits.len() <= e {
                format!("{}{}", "0".repeat(e + 1 - digits.len()), digits)
            } else {
                digits
            };
            let (int, frac) = padded.split_at(padded.len() - e);
            let frac = frac.trim_end_matches('0');
            format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
        }
        None => format!("{}/{}", x.numer(), x.denom()),
    }
}

/// `a/b` (or `a`) text, the form accepted back by the parsers.
pub fn fmt_ratio(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `a`, `-a`, or `a/b` with `b > 0`.
pub fn parse_ratio(text: &str) -> Option<Q> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Parse either a ratio or a finite decimal such as `0.75`.
pub fn parse_exact(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let scale = BigInt::from(10u8).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().ok()?;
        let mag = int_part.abs() * &scale + frac_part;
        let value = Q::new(mag, scale);
        return Some(if neg { -value } else { value });
    }
    parse_ratio(text)
}

pub fn to_f64(x: &Q) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        return n / d;
    }
    // huge operands: shift both down to the f64 range first
    let shift = (x.numer().bits().max(x.denom().bits())).saturating_sub(1000) as usize;
    let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

pub fn biguint_to_q(n: &BigUint) -> Q {
    Q::from_integer(BigInt::from(n.clone()))
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i);
        acc = acc.div_floor(&BigUint::from(i + 1));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_decimal_text() {
        assert_eq!(fmt_exact(&q(3, 4)), "0.75");
        assert_eq!(fmt_exact(&q(-1, 8)), "-0.125");
        assert_eq!(fmt_exact(&q(5, 2)), "2.5");
        assert_eq!(fmt_exact(&qi(7)), "7");
        assert_eq!(fmt_exact(&q(1, 3)), "1/3");
        assert_eq!(parse_exact("0.75"), Some(q(3, 4)));
        assert_eq!(parse_exact("-0.125"), Some(q(-1, 8)));
        assert_eq!(parse_exact("3/6"), Some(q(1, 2)));
        assert_eq!(parse_exact("1/0"), None);
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(floor_dyadic(&q(1, 3), 2), q(1, 4));
        assert_eq!(ceil_dyadic(&q(1, 3), 2), q(1, 2));
        assert_eq!(floor_dyadic(&q(-1, 3), 1), q(-1, 2));
        assert!(is_dyadic(&q(3, 8)));
        assert!(!is_dyadic(&q(1, 6)));
        assert_eq!(dyadic_exponent(&q(3, 8)), Some(3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        assert_eq!(binomial(4, 7), BigUint::zero());
    }
}
