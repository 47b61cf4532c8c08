//! Bijections between naturals and the combinatorial objects enumerated
//! throughout the crate. Every documented enumeration position is derived
//! from the functions in this file.
//!
//! * `cantor_pair(x, y) = (x + y)(x + y + 1)/2 + y`.
//! * `tuple_unrank(j, m)`: m-tuples ordered by coordinate sum, then
//!   lexicographically ascending.
//! * `list_decode`: `0 -> []`, `1 + pair(h, t) -> h :: list(t)`.
//! * `rational_at`: `0 -> 0`, `2k-1 -> cw(k)`, `2k -> -cw(k)`, where `cw` is
//!   the Calkin-Wilf sequence (`cw(1) = 1`).
//! * `gauss_rational_at(n)`: `(a, b) = cantor_unpair(n)`, value
//!   `rational_at(a) + rational_at(b)·i`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};

use super::{GaussQ, Q};

pub fn cantor_pair(x: u64, y: u64) -> u64 {
    let s = x as u128 + y as u128;
    let v = s * (s + 1) / 2 + y as u128;
    u64::try_from(v).expect("pairing overflow")
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).sqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = z - t;
    let x = w - y;
    (x as u64, y as u64)
}


fn binom_sat(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of m-tuples of naturals with coordinate sum exactly `s`.
fn with_sum(s: u64, m: usize) -> u128 {
    if m == 0 {
        return if s == 0 { 1 } else { 0 };
    }
    binom_sat(s + m as u64 - 1, m as u64 - 1)
}

pub fn tuple_unrank(j: u64, m: usize) -> Vec<u64> {
    if m == 0 {
        return Vec::new();
    }
    let mut j = j as u128;
    let mut s = 0u64;
    loop {
        let c = with_sum(s, m);
        if j < c {
            break;
        }
        j -= c;
        s += 1;
    }
    let mut out = Vec::with_capacity(m);
    let mut rest = s;
    for pos in 0..m {
        let remaining = m - pos - 1;
        if remaining == 0 {
            out.push(rest);
            break;
        }
        let mut v = 0u64;
        loop {
            let c = with_sum(rest - v, remaining);
            if j < c {
                break;
            }
            j -= c;
            v += 1;
        }
        out.push(v);
        rest -= v;
    }
    out
}

pub fn tuple_rank(t: &[u64]) -> u64 {
    let m = t.len();
    if m == 0 {
        return 0;
    }
    let s: u64 = t.iter().sum();
    let mut j: u128 = (0..s).map(|x| with_sum(x, m)).sum();
    let mut rest = s;
    for (pos, &x) in t.iter().enumerate() {
        let remaining = m - pos - 1;
        if remaining == 0 {
            break;
        }
        for v in 0..x {
            j += with_sum(rest - v, remaining);
        }
        rest -= x;
    }
    u64::try_from(j).expect("tuple rank overflow")
}

pub fn list_decode(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        let (h, t) = cantor_unpair(n - 1);
        out.push(h);
        n = t;
    }
    out
}

pub fn list_encode(items: &[u64]) -> u64 {
    items
        .iter()
        .rev()
        .fold(0u64, |acc, &h| 1 + cantor_pair(h, acc))
}

fn calkin_wilf(n: u64) -> (BigInt, BigInt) {
    debug_assert!(n >= 1);
    let (mut a, mut b) = (BigInt::one(), BigInt::one());
    let bits = 64 - n.leading_zeros();
    for i in (0..bits - 1).rev() {
        if (n >> i) & 1 == 0 {
            b = &a + &b;
        } else {
            a = &a + &b;
        }
    }
    (a, b)
}

fn calkin_wilf_index(a: &BigInt, b: &BigInt) -> u64 {
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut path = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if a > b {
            path.push(1u64);
            a -= &b;
        } else {
            path.push(0u64);
            b -= &a;
        }
    }
    path.iter().rev().fold(1u64, |acc, &bit| (acc << 1) | bit)
}

pub fn rational_at(n: u64) -> Q {
    if n == 0 {
        return Q::zero();
    }
    let k = n.div_ceil(2);
    let (a, b) = calkin_wilf(k);
    let v = Q::new(a, b);
    if n % 2 == 1 {
        v
    } else {
        -v
    }
}

pub fn rational_index(x: &Q) -> u64 {
    if x.is_zero() {
        return 0;
    }
    let k = calkin_wilf_index(&x.numer().abs(), x.denom());
    if x.is_positive() {
        2 * k - 1
    } else {
        2 * k
    }
}

pub fn gauss_rational_at(n: u64) -> GaussQ {
    let (a, b) = cantor_unpair(n);
    GaussQ::new(rational_at(a), rational_at(b))
}

pub fn gauss_index(z: &GaussQ) -> u64 {
    cantor_pair(rational_index(&z.re), rational_index(&z.im))
}
