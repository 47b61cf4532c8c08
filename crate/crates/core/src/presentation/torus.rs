//! Sup norm of a Laurent polynomial over the torus `T^d`, which is the
//! reduced C*-norm for free abelian groups.
//!
//! Each circle is covered by two charts `z = ±(1 - t² + 2ti)/(1 + t²)`,
//! `t ∈ [-1, 1]`. On a box of half-width `h` around `c` the polynomial
//! moves by at most `2h·Σ_j L_j`, where `L_j = Σ_k |k_j|·|c_k|`, since
//! `|dθ/dt| <= 2`. Boxes are refined best-first until the gap between
//! the best evaluated value and the largest box bound is at most `2^-k`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{One, Zero};

use crate::group::{generator_of, GroupAlgebraElement};
use crate::numeric::{pow2_neg, q_min, sqrt_interval, GaussQ, Q};

struct Poly {
    terms: Vec<(Vec<i64>, GaussQ)>,
    lipschitz: Q,
}

impl Poly {
    fn new(a: &GroupAlgebraElement) -> Poly {
        let d = a.spec.rank();
        let terms: Vec<(Vec<i64>, GaussQ)> = a
            .terms
            .iter()
            .map(|(w, c)| {
                let mut e = vec![0i64; d];
                for &l in w {
                    e[generator_of(l)] += l.signum() as i64;
                }
                (e, c.clone())
            })
            .collect();
        let mut lipschitz = Q::zero();
        for j in 0..d {
            for (e, c) in &terms {
                lipschitz += Q::from_integer(e[j].abs().into()) * c.modulus_upper();
            }
        }
        Poly { terms, lipschitz }
    }

    /// `|p(z)|²` at the chart point `(signs, t)`.
    fn modulus_sq(&self, signs: &[bool], t: &[Q]) -> Q {
        let z: Vec<GaussQ> = t
            .iter()
            .zip(signs)
            .map(|(t, &neg)| {
                let den = Q::one() + t * t;
                let w = GaussQ::new((Q::one() - t * t) / &den, (t + t) / &den);
                if neg {
                    -&w
                } else {
                    w
                }
            })
            .collect();
        let mut total = GaussQ::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (zj, &ej) in z.iter().zip(e) {
                let base = if ej < 0 { zj.conj() } else { zj.clone() };
                for _ in 0..ej.unsigned_abs() {
                    v = &v * &base;
                }
            }
            total = &total + &v;
        }
        total.modulus_sq()
    }
}

struct Cell {
    upper: Q,
    signs: Vec<bool>,
    center: Vec<Q>,
    half: Q,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.upper == other.upper
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.cmp(&other.upper)
    }
}

/// `(lo, hi)` with `lo <= sup_{T^d} |a| <= hi` and `hi - lo <= 2^-k`.
pub fn torus_sup_norm(a: &GroupAlgebraElement, k: u32) -> (Q, Q) {
    if a.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let poly = Poly::new(a);
    let d = a.spec.rank();
    let cap = a.l1_norm();
    if d == 0 || poly.lipschitz.is_zero() {
        let iv = sqrt_interval(&poly.modulus_sq(&vec![false; d], &vec![Q::zero(); d]), k);
        return (iv.lo, iv.hi);
    }
    let eps = pow2_neg(k);
    let prec = k + 2;
    let mut best = Q::zero();
    let mut heap = BinaryHeap::new();
    let push = |heap: &mut BinaryHeap<Cell>, best: &mut Q, signs: Vec<bool>, center: Vec<Q>, half: Q| {
        let iv = sqrt_interval(&poly.modulus_sq(&signs, &center), prec);
        if iv.lo > *best {
            *best = iv.lo.clone();
        }
        let upper = &iv.hi + Q::from_integer(2.into()) * &half * &poly.lipschitz;
        heap.push(Cell { upper, signs, center, half });
    };
    for mask in 0..(1u32 << d) {
        let signs: Vec<bool> = (0..d).map(|j| mask >> j & 1 == 1).collect();
        push(&mut heap, &mut best, signs, vec![Q::zero(); d], Q::one());
    }
    loop {
        let top = heap.pop().expect("cells never run out");
        let hi = q_min(&top.upper, &cap);
        if &hi - &best <= eps {
            let lo = q_min(&best, &hi);
            return (lo, hi);
        }
        let h2 = &top.half / Q::from_integer(2.into());
        for child in 0..(1u32 << d) {
            let center: Vec<Q> = top
                .center
                .iter()
                .enumerate()
                .map(|(j, c)| if child >> j & 1 == 1 { c + &h2 } else { c - &h2 })
                .collect();
            push(&mut heap, &mut best, top.signs.clone(), center, h2.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::numeric::{q, to_f64};
    use std::sync::Arc;

    #[test]
    fn cosine_has_sup_one() {
        let spec = Arc::new(GroupSpec::integers());
        let a = GroupAlgebraElement::parse(&spec, "1/2*u + 1/2*u^-1").unwrap();
        let (lo, hi) = torus_sup_norm(&a, 12);
        assert!(lo <= Q::one() && Q::one() <= hi);
        assert!(&hi - &lo <= pow2_neg(12));
    }

    #[test]
    fn two_variable_polynomial_matches_grid() {
        let spec = Arc::new(GroupSpec::free_abelian(&["u", "v"]));
        let a = GroupAlgebraElement::parse(&spec, "1/3*e + 1/3*u + (0+1/3i)*v^-1").unwrap();
        let (lo, hi) = torus_sup_norm(&a, 10);
        // |1 + z + i w̄|/3 peaks at 1 when all three terms align
        assert!(lo <= Q::one() && Q::one() <= hi, "{} {}", to_f64(&lo), to_f64(&hi));
        let b = GroupAlgebraElement::parse(&spec, "1/2*u - 1/4*u*v").unwrap();
        let (lo, hi) = torus_sup_norm(&b, 10);
        assert!(lo <= q(3, 4) && q(3, 4) <= hi);
    }
}
