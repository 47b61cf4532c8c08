//! Trace moments `τ((a*a)^n)` and the λ-norm lower bounds they give.
//!
//! Two routes compute the same numbers:
//!
//! * direct expansion: `τ(b^n) = Σ_w b^h(w)·b^(n-h)(w⁻¹)` with `b = a*a`
//!   and `h = ⌈n/2⌉`; in free and free abelian groups words too long to
//!   cancel within the remaining factors are dropped;
//! * free cumulants: when `a` is self-adjoint in a free group and every
//!   support word is a power of a single generator, the parts living in
//!   different cyclic subgroups are free, so free cumulants add. Each
//!   part's moments come from its Laurent polynomial, and the moments of
//!   `a` are rebuilt from the summed cumulants.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use super::element::GroupAlgebraElement;
use super::spec::{generator_of, Backend, Word};
use super::GroupError;
use crate::numeric::{nth_root_floor, GaussQ, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentRoute {
    Direct,
    FreeCumulant,
}

impl MomentRoute {
    pub fn name(&self) -> &'static str {
        match self {
            MomentRoute::Direct => "direct",
            MomentRoute::FreeCumulant => "free-cumulant",
        }
    }
}

/// The route `moments` takes for `a`.
pub fn preferred_route(a: &GroupAlgebraElement) -> MomentRoute {
    if cyclic_parts(a).is_some() {
        MomentRoute::FreeCumulant
    } else {
        MomentRoute::Direct
    }
}

/// `τ((a*a)^n)` for `n = 0..=nmax`.
pub fn moments(a: &GroupAlgebraElement, nmax: usize) -> Result<Vec<Q>, GroupError> {
    moments_via(a, nmax, preferred_route(a))
}

pub fn moments_via(
    a: &GroupAlgebraElement,
    nmax: usize,
    route: MomentRoute,
) -> Result<Vec<Q>, GroupError> {
    match route {
        MomentRoute::Direct => moments_direct(a, nmax),
        MomentRoute::FreeCumulant => moments_free(a, nmax).ok_or(GroupError::RouteNotApplicable),
    }
}

type Sparse = HashMap<Word, GaussQ>;

fn add_into(map: &mut Sparse, w: Word, c: GaussQ) {
    match map.get_mut(&w) {
        Some(v) => {
            *v = &*v + &c;
            if v.is_zero() {
                map.remove(&w);
            }
        }
        None => {
            if !c.is_zero() {
                map.insert(w, c);
            }
        }
    }
}

pub fn moments_direct(a: &GroupAlgebraElement, nmax: usize) -> Result<Vec<Q>, GroupError> {
    let spec = &a.spec;
    let b = a.adjoint().mul(a)?;
    let half = nmax.div_ceil(2);
    let prune = spec.length_is_norm();
    let step = b.max_length();
    let keep = |w: &Word, j: usize| !prune || w.len() <= step * (nmax - j);
    let mut powers: Vec<Sparse> = vec![Sparse::from([(Vec::new(), GaussQ::one())])];
    for j in 1..=half {
        let prev = &powers[j - 1];
        let mut next = Sparse::new();
        for (v, x) in prev {
            for (w, y) in &b.terms {
                let p = spec.multiply(v, w)?;
                if keep(&p, j) {
                    add_into(&mut next, p, x * y);
                }
            }
        }
        powers.push(next);
    }
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(Q::one());
    for n in 1..=nmax {
        let h = n.div_ceil(2);
        let (big, small) = (&powers[h], &powers[n - h]);
        let mut total = GaussQ::zero();
        for (w, x) in small {
            let inv = spec.inverse(w)?;
            if let Some(y) = big.get(&inv) {
                total = &total + &(x * y);
            }
        }
        debug_assert!(total.is_real());
        out.push(total.re);
    }
    Ok(out)
}

/// Splits `a` into its identity coefficient and Laurent polynomials in
/// single generators, when the free-cumulant route applies.
fn cyclic_parts(a: &GroupAlgebraElement) -> Option<(Q, Vec<BTreeMap<i64, GaussQ>>)> {
    if a.spec.backend != Backend::Free || !a.is_self_adjoint() {
        return None;
    }
    let mut scalar = Q::zero();
    let mut parts: BTreeMap<usize, BTreeMap<i64, GaussQ>> = BTreeMap::new();
    for (w, c) in &a.terms {
        if w.is_empty() {
            scalar = c.re.clone();
            continue;
        }
        if w.iter().any(|&l| l != w[0]) {
            return None;
        }
        let power = w.len() as i64 * if w[0] > 0 { 1 } else { -1 };
        parts.entry(generator_of(w[0])).or_default().insert(power, c.clone());
    }
    Some((scalar, parts.into_values().collect()))
}

/// `τ(p^m)` for `m = 0..=mmax`, `p` a Laurent polynomial.
fn laurent_moments(p: &BTreeMap<i64, GaussQ>, mmax: usize) -> Vec<Q> {
    let mut cur: BTreeMap<i64, GaussQ> = BTreeMap::from([(0, GaussQ::one())]);
    let mut out = vec![Q::one()];
    for _ in 1..=mmax {
        let mut next: BTreeMap<i64, GaussQ> = BTreeMap::new();
        for (e, x) in &cur {
            for (f, y) in p {
                let slot = next.entry(e + f).or_insert_with(GaussQ::zero);
                *slot = &*slot + &(x * y);
            }
        }
        next.retain(|_, v| !v.is_zero());
        out.push(next.get(&0).map(|c| c.re.clone()).unwrap_or_else(Q::zero));
        cur = next;
    }
    out
}

/// Table `T[s][t] = [z^t] M(z)^s` for a moment series `M` grown one
/// coefficient at a time.
struct PowerTable {
    moments: Vec<Q>,
    table: Vec<Vec<Q>>,
    smax: usize,
}

impl PowerTable {
    fn new(smax: usize) -> Self {
        let mut table = vec![Vec::new(); smax + 1];
        table[0].push(Q::one());
        for row in table.iter_mut().skip(1) {
            row.push(Q::one());
        }
        PowerTable {
            moments: vec![Q::one()],
            table,
            smax,
        }
    }

    fn get(&self, s: usize, t: usize) -> &Q {
        &self.table[s][t]
    }

    /// Appends `m_n` and fills column `n`.
    fn push(&mut self, m: Q) {
        self.moments.push(m);
        let n = self.moments.len() - 1;
        self.table[0].push(Q::zero());
        for s in 1..=self.smax {
            let mut acc = Q::zero();
            for j in 0..=n {
                acc += &self.moments[j] * &self.table[s - 1][n - j];
            }
            self.table[s].push(acc);
        }
    }
}

/// Free cumulants `κ_1..κ_N` from moments `m_0 = 1, m_1..m_N`.
pub fn free_cumulants(moments: &[Q]) -> Vec<Q> {
    let nn = moments.len() - 1;
    let mut t = PowerTable::new(nn);
    let mut kappa = vec![Q::zero()];
    for n in 1..=nn {
        let mut k = moments[n].clone();
        for (s, ks) in kappa.iter().enumerate().take(n).skip(1) {
            k -= ks * t.get(s, n - s);
        }
        kappa.push(k);
        t.push(moments[n].clone());
    }
    kappa
}

/// Moments `m_0..m_N` from free cumulants `κ_0 (ignored), κ_1..κ_N`.
pub fn moments_from_cumulants(kappa: &[Q]) -> Vec<Q> {
    let nn = kappa.len() - 1;
    let mut t = PowerTable::new(nn);
    let mut m = vec![Q::one()];
    for n in 1..=nn {
        let mut acc = kappa[n].clone();
        for (s, ks) in kappa.iter().enumerate().take(n).skip(1) {
            acc += ks * t.get(s, n - s);
        }
        t.push(acc.clone());
        m.push(acc);
    }
    m
}

/// `None` unless the free-cumulant route applies to `a`.
pub fn moments_free(a: &GroupAlgebraElement, nmax: usize) -> Option<Vec<Q>> {
    let (scalar, parts) = cyclic_parts(a)?;
    let order = 2 * nmax;
    let mut kappa = vec![Q::zero(); order + 1];
    if order >= 1 {
        kappa[1] = scalar;
    }
    for p in &parts {
        let k = free_cumulants(&laurent_moments(p, order));
        for (acc, x) in kappa.iter_mut().zip(k).skip(1) {
            *acc += x;
        }
    }
    let m = moments_from_cumulants(&kappa);
    // a is self-adjoint, so τ((a*a)^n) = τ(a^(2n))
    Some((0..=nmax).map(|n| m[2 * n].clone()).collect())
}

/// Dyadic `q` with `q <= τ((a*a)^n)^(1/2n) <= q + 2^-k`.
pub fn lambda_norm_lower(a: &GroupAlgebraElement, n: usize, k: u32) -> Result<Q, GroupError> {
    assert!(n >= 1, "moment order starts at 1");
    let m = moments(a, n)?;
    Ok(nth_root_floor(&m[n], 2 * n as u32, k))
}

/// Lower bounds for `n = 1..=nmax` from one moment sweep.
pub fn lambda_norm_lower_sweep(
    a: &GroupAlgebraElement,
    nmax: usize,
    k: u32,
) -> Result<Vec<Q>, GroupError> {
    let m = moments(a, nmax)?;
    Ok((1..=nmax)
        .map(|n| nth_root_floor(&m[n], 2 * n as u32, k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::spec::GroupSpec;
    use crate::numeric::{binomial, biguint_to_q, q};
    use std::sync::Arc;

    #[test]
    fn central_binomials() {
        let z = Arc::new(GroupSpec::integers());
        let a = GroupAlgebraElement::parse(&z, "u + u^-1").unwrap();
        let m = moments(&a, 12).unwrap();
        for (n, x) in m.iter().enumerate() {
            assert_eq!(*x, biguint_to_q(&binomial(2 * n as u64, n as u64)));
        }
        let lo = lambda_norm_lower(&a, 1, 16).unwrap();
        let hi = &lo + crate::numeric::pow2_neg(16);
        assert!(&lo * &lo <= q(2, 1) && q(2, 1) < &hi * &hi);
    }

    #[test]
    fn routes_agree_on_free_groups() {
        let f2 = Arc::new(GroupSpec::free(&["u", "v"]));
        for text in ["u + u^-1 + v + v^-1", "2 + u + u^-1 + 1/2*v^2 + 1/2*v^-2", "(0+1i)*u - (0+1i)*u^-1 + v + v^-1"] {
            let a = GroupAlgebraElement::parse(&f2, text).unwrap();
            assert_eq!(preferred_route(&a), MomentRoute::FreeCumulant);
            let d = moments_direct(&a, 6).unwrap();
            let f = moments_free(&a, 6).unwrap();
            assert_eq!(d, f, "{text}");
        }
        let g = GroupAlgebraElement::parse(&f2, "u*v + v^-1*u^-1").unwrap();
        assert_eq!(preferred_route(&g), MomentRoute::Direct);
    }

    #[test]
    fn semicircle_cumulants() {
        // Catalan moments have κ_2 = 1 and all other cumulants zero
        let catalan: Vec<Q> = (0..=8u64)
            .map(|n| {
                if n % 2 == 1 {
                    Q::zero()
                } else {
                    let h = n / 2;
                    biguint_to_q(&binomial(2 * h, h)) / Q::from_integer((h as i64 + 1).into())
                }
            })
            .collect();
        let k = free_cumulants(&catalan);
        assert_eq!(k[2], Q::one());
        assert!(k.iter().enumerate().all(|(i, x)| i == 2 || x.is_zero()));
        assert_eq!(moments_from_cumulants(&k), catalan);
    }
}
