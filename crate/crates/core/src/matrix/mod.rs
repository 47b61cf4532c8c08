//! Exact Gaussian-rational matrices: traces, certified 2-norms, and
//! certified operator-norm bounds.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{
    gauss_rational_at, nth_root_ceil, nth_root_floor, pow2, sqrt_interval, tuple_rank, tuple_unrank,
    GaussQ, Interval, Q, gauss_index,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum MatrixError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("zero vector")]
    ZeroVector,
    #[error("size {0} is not a power of two")]
    NotDyadicSize(usize),
    #[error("enumerated size 2^{0} exceeds the supported maximum")]
    TooLarge(u32),
    #[error("bad matrix text: {0}")]
    BadText(String),
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussMatrix {
    n: usize,
    entries: Vec<GaussQ>,
}

/// Bits of precision for `opnorm_upper`.
pub const OPNORM_BITS: u32 = 40;

/// Largest `k` for which `enumerate_matrices` materializes `2^k x 2^k`.
pub const MAX_ENUMERATED_LOG_SIZE: u32 = 10;

impl GaussMatrix {
    pub fn zero(n: usize) -> Self {
        GaussMatrix {
            n,
            entries: vec![GaussQ::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = GaussQ::one();
        }
        m
    }

    pub fn diag(values: &[GaussQ]) -> Self {
        let n = values.len();
        let mut m = Self::zero(n);
        for (i, v) in values.iter().enumerate() {
            m.entries[i * n + i] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussQ>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(MatrixError::SizeMismatch(n, r.len()));
        }
        Ok(GaussMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Rows separated by `;`, entries by `,`: `1, 0; 0, 1/2+1i`.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let rows = text
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| {
                        crate::parser::parse_gauss(e)
                            .map_err(|_| MatrixError::BadText(format!("bad entry `{}`", e.trim())))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussQ {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[GaussQ] {
        &self.entries
    }

    fn check(&self, other: &Self) -> Result<(), MatrixError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(MatrixError::SizeMismatch(self.n, other.n))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check(other)?;
        Ok(GaussMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &GaussQ) -> Self {
        GaussMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check(other)?;
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.entries[k * n + j];
                    if !b.is_zero() {
                        let slot = &mut out.entries[i * n + j];
                        *slot = &*slot + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> GaussQ {
        (0..self.n).fold(GaussQ::zero(), |acc, i| &acc + &self.entries[i * self.n + i])
    }

    pub fn normalized_trace(&self) -> GaussQ {
        self.trace().scale(&Q::new(BigInt::one(), BigInt::from(self.n)))
    }

    /// `tr(A*A)/n = Σ|a_ij|²/n`, exact.
    pub fn two_norm_sq(&self) -> Q {
        let s: Q = self.entries.iter().map(GaussQ::modulus_sq).sum();
        s / Q::from_integer(BigInt::from(self.n))
    }

    /// Interval of width at most `2^-k` around `√(tr(A*A)/n)`.
    pub fn two_norm(&self, k: u32) -> Interval {
        sqrt_interval(&self.two_norm_sq(), k)
    }

    /// `tr(H^(2^m))` with `H = A*A`, by `m` exact squarings.
    pub fn trace_power(&self, m: u32) -> Q {
        let mut h = self.conj_transpose().mul(self).expect("same size");
        for _ in 0..m {
            h = h.mul(&h).expect("same size");
        }
        h.trace().re
    }

    /// Upper bound for `‖A‖`: `tr(H^(2^m))^(1/2^(m+1))` rounded up to
    /// `OPNORM_BITS` bits.
    pub fn opnorm_upper(&self, m: u32) -> Q {
        self.opnorm_upper_at(m, OPNORM_BITS)
    }

    pub fn opnorm_upper_at(&self, m: u32, k: u32) -> Q {
        nth_root_ceil(&self.trace_power(m), 1 << (m + 1), k)
    }

    /// Upper bounds for `m = 0..=mmax` sharing one squaring chain.
    pub fn opnorm_upper_sweep(&self, mmax: u32, k: u32) -> Vec<Q> {
        let mut h = self.conj_transpose().mul(self).expect("same size");
        let mut out = Vec::new();
        for m in 0..=mmax {
            out.push(nth_root_ceil(&h.trace().re, 1 << (m + 1), k));
            if m < mmax {
                h = h.mul(&h).expect("same size");
            }
        }
        out
    }

    pub fn apply(&self, v: &[GaussQ]) -> Result<Vec<GaussQ>, MatrixError> {
        if v.len() != self.n {
            return Err(MatrixError::SizeMismatch(self.n, v.len()));
        }
        Ok((0..self.n)
            .map(|i| {
                (0..self.n).fold(GaussQ::zero(), |acc, j| &acc + &(&self.entries[i * self.n + j] * &v[j]))
            })
            .collect())
    }

    /// Dyadic `q <= ‖Av‖/‖v‖` within `2^-k`, from the exact radicand.
    pub fn opnorm_lower(&self, v: &[GaussQ], k: u32) -> Result<Q, MatrixError> {
        let vv: Q = v.iter().map(GaussQ::modulus_sq).sum();
        if vv.is_zero() {
            return Err(MatrixError::ZeroVector);
        }
        let av: Q = self.apply(v)?.iter().map(GaussQ::modulus_sq).sum();
        Ok(nth_root_floor(&(av / vv), 2, k))
    }

    /// Candidate vectors for `opnorm_lower`: random small Gaussian
    /// rational starts pushed through `steps` rounds of `v <- A*A v`,
    /// renormalized and rounded to `bits`-bit dyadics each round.
    pub fn rayleigh_candidates<R: Rng>(
        &self,
        rng: &mut R,
        count: usize,
        steps: usize,
        bits: u32,
    ) -> Vec<Vec<GaussQ>> {
        let h = self.conj_transpose().mul(self).expect("same size");
        (0..count)
            .map(|_| {
                let mut v: Vec<GaussQ> = (0..self.n)
                    .map(|_| {
                        GaussQ::new(
                            Q::new(rng.gen_range(-8..=8).into(), 8.into()),
                            Q::new(rng.gen_range(-8..=8).into(), 8.into()),
                        )
                    })
                    .collect();
                if v.iter().all(GaussQ::is_zero) {
                    v[0] = GaussQ::one();
                }
                for _ in 0..steps {
                    let w = h.apply(&v).expect("same size");
                    let scale = w.iter().map(GaussQ::modulus_upper).max().unwrap_or_else(Q::zero);
                    if scale.is_zero() {
                        break;
                    }
                    v = w
                        .iter()
                        .map(|z| round_gauss(&z.scale(&scale.recip()), bits))
                        .collect();
                }
                v
            })
            .collect()
    }

    /// Best `opnorm_lower` over the given candidates.
    pub fn best_lower(&self, candidates: &[Vec<GaussQ>], k: u32) -> Option<Q> {
        candidates
            .iter()
            .filter_map(|v| self.opnorm_lower(v, k).ok())
            .max()
    }

    /// `A ⊗ I₂`.
    pub fn embed_dyadic(&self) -> Result<Self, MatrixError> {
        if !self.n.is_power_of_two() {
            return Err(MatrixError::NotDyadicSize(self.n));
        }
        let n2 = 2 * self.n;
        let mut out = Self::zero(n2);
        for i in 0..self.n {
            for j in 0..self.n {
                for b in 0..2 {
                    out.entries[(2 * i + b) * n2 + 2 * j + b] = self.entries[i * self.n + j].clone();
                }
            }
        }
        Ok(out)
    }
}

fn round_gauss(z: &GaussQ, bits: u32) -> GaussQ {
    let r = |x: &Q| {
        let scaled = x * Q::from_integer(pow2(bits));
        Q::new(scaled.round().to_integer(), pow2(bits))
    };
    GaussQ::new(r(&z.re), r(&z.im))
}

impl fmt::Display for GaussMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

/// Enumeration of `⋃_k M_{2^k}(ℚ(i))`: `index + 1 = 2^k (2j + 1)` picks
/// the size `2^k`, and the entries (row-major) are
/// `gauss_rational_at` of `tuple_unrank(j, 4^k)`. Index 0 is the `1x1`
/// zero matrix, `I₁` is index 2 and `I₂` index 45.
pub fn enumerate_matrices(index: u64) -> Result<GaussMatrix, MatrixError> {
    let (k, j) = split_index(index);
    if k > MAX_ENUMERATED_LOG_SIZE {
        return Err(MatrixError::TooLarge(k));
    }
    let n = 1usize << k;
    let entries = tuple_unrank(j, n * n).into_iter().map(gauss_rational_at).collect();
    Ok(GaussMatrix { n, entries })
}

fn split_index(index: u64) -> (u32, u64) {
    let v = index as u128 + 1;
    let k = v.trailing_zeros();
    (k, ((v >> k) as u64 - 1) / 2)
}

/// Inverse of `enumerate_matrices` (size must be a power of two).
pub fn matrix_index(a: &GaussMatrix) -> Result<u64, MatrixError> {
    if !a.n.is_power_of_two() {
        return Err(MatrixError::NotDyadicSize(a.n));
    }
    let k = a.n.trailing_zeros();
    let t: Vec<u64> = a.entries.iter().map(gauss_index).collect();
    let j = tuple_rank(&t) as u128;
    Ok(((1u128 << k) * (2 * j + 1) - 1) as u64)
}

/// Relative gap `(upper - lower)/upper`, exact.
pub fn relative_gap(lower: &Q, upper: &Q) -> Q {
    if upper.is_zero() {
        return Q::zero();
    }
    ((upper - lower) / upper).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;
    use rand::SeedableRng;

    fn g(a: i64, b: i64) -> GaussQ {
        GaussQ::real(q(a, b))
    }

    #[test]
    fn traces_and_norms() {
        let i2 = GaussMatrix::identity(2);
        assert_eq!(i2.normalized_trace(), GaussQ::one());
        assert_eq!(i2.two_norm(10), Interval::point(q(1, 1)));
        let p = GaussMatrix::diag(&[g(1, 1), g(0, 1)]);
        assert!(p.two_norm(20).contains(&q(7071067, 10000000)));
        assert_eq!(GaussMatrix::zero(3).two_norm(4), Interval::point(q(0, 1)));
        assert_eq!(p.opnorm_upper(0), q(1, 1));
        // tr(I₂^(2^m)) = 2
        for m in 0..4 {
            let u = i2.opnorm_upper(m);
            assert_eq!(u, nth_root_ceil(&q(2, 1), 1 << (m + 1), OPNORM_BITS));
            assert!(u >= q(1, 1));
        }
    }

    #[test]
    fn sandwich_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let rows = (0..4)
                .map(|_| (0..4).map(|_| GaussQ::new(q(rng.gen_range(-4..5), 4), q(rng.gen_range(-4..5), 4))).collect())
                .collect();
            let a = GaussMatrix::from_rows(rows).unwrap();
            let ups = a.opnorm_upper_sweep(8, OPNORM_BITS);
            assert!(ups.windows(2).all(|w| w[1] <= w[0]));
            let cands = a.rayleigh_candidates(&mut rng, 4, 20, 32);
            let lo = a.best_lower(&cands, 32).unwrap();
            assert!(lo <= ups[8]);
            assert!(relative_gap(&lo, &ups[8]) <= q(1, 50));
        }
    }

    #[test]
    fn embedding() {
        let i2 = GaussMatrix::identity(2);
        assert_eq!(i2.embed_dyadic().unwrap(), GaussMatrix::identity(4));
        let a = GaussMatrix::parse("1, 1/2+1i; 0, -1/3").unwrap();
        let b = GaussMatrix::parse("0, 1; 1, 1/5i").unwrap();
        let ea = a.embed_dyadic().unwrap();
        assert_eq!(ea.two_norm_sq(), a.two_norm_sq());
        assert_eq!(ea.normalized_trace(), a.normalized_trace());
        assert_eq!(a.mul(&b).unwrap().embed_dyadic().unwrap(), ea.mul(&b.embed_dyadic().unwrap()).unwrap());
        assert_eq!(GaussMatrix::zero(3).embed_dyadic(), Err(MatrixError::NotDyadicSize(3)));
    }

    #[test]
    fn enumeration() {
        assert_eq!(enumerate_matrices(0).unwrap(), GaussMatrix::zero(1));
        assert_eq!(enumerate_matrices(2).unwrap(), GaussMatrix::identity(1));
        assert_eq!(enumerate_matrices(45).unwrap(), GaussMatrix::identity(2));
        let mut seen = std::collections::HashSet::new();
        for i in 0..200 {
            let m = enumerate_matrices(i).unwrap();
            assert_eq!(matrix_index(&m).unwrap(), i);
            assert!(seen.insert(m));
        }
    }
}
