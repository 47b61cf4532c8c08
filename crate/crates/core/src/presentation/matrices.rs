//! `R` as the closure of `⋃_k M_{2^k}(ℚ(i))` in the trace 2-norm.

use super::{shrink_factor, CertificationMode, NormReport, Presentation, PresentationError};
use crate::formula::Signature;
use crate::matrix::{enumerate_matrices, GaussMatrix};
use crate::numeric::{cantor_unpair, GaussQ};

/// Cap on the number of squarings behind the `p_{m,n}` bound.
pub const R_MAX_SQUARINGS: u32 = 6;

/// Special point `n` is `B_{m,j} = A_j / max(p_{m,j}, 1)` with
/// `(m, j) = cantor_unpair(n)`, `m` capped at `R_MAX_SQUARINGS`, and
/// `p_{m,j} >= ‖A_j‖` the trace-power bound.
#[derive(Clone, Debug, Default)]
pub struct RPresentation;

impl RPresentation {
    pub fn new() -> Self {
        RPresentation
    }

    /// Raises both matrices to a common dyadic size.
    pub fn align(
        a: &GaussMatrix,
        b: &GaussMatrix,
    ) -> Result<(GaussMatrix, GaussMatrix), PresentationError> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while a.size() < b.size() {
            a = a.embed_dyadic()?;
        }
        while b.size() < a.size() {
            b = b.embed_dyadic()?;
        }
        Ok((a, b))
    }
}

impl Presentation for RPresentation {
    type Elem = GaussMatrix;

    fn name(&self) -> String {
        "R".into()
    }

    fn mode(&self) -> CertificationMode {
        CertificationMode::TwoSided
    }

    fn signature(&self) -> Signature {
        Signature::tvna()
    }

    fn special_point(&self, n: u64) -> Result<GaussMatrix, PresentationError> {
        let (m, j) = cantor_unpair(n);
        let m = (m as u32).min(R_MAX_SQUARINGS);
        let a = enumerate_matrices(j)?;
        let p = a.opnorm_upper(m);
        Ok(a.scale(&GaussQ::real(shrink_factor(&p))))
    }

    fn unit(&self) -> GaussMatrix {
        GaussMatrix::identity(1)
    }

    fn mul(&self, a: &GaussMatrix, b: &GaussMatrix) -> Result<GaussMatrix, PresentationError> {
        let (a, b) = Self::align(a, b)?;
        Ok(a.mul(&b)?)
    }

    fn adjoint(&self, a: &GaussMatrix) -> GaussMatrix {
        a.conj_transpose()
    }

    fn combine(
        &self,
        l: &GaussQ,
        a: &GaussMatrix,
        m: &GaussQ,
        b: &GaussMatrix,
    ) -> Result<GaussMatrix, PresentationError> {
        let (a, b) = Self::align(a, b)?;
        Ok(a.scale(l).add(&b.scale(m))?)
    }

    fn norm(&self, a: &GaussMatrix, k: u32, _budget: usize) -> NormReport {
        let iv = a.two_norm(k);
        NormReport::TwoSided { lo: iv.lo, hi: iv.hi }
    }

    fn trace(&self, a: &GaussMatrix) -> Option<GaussQ> {
        Some(a.normalized_trace())
    }

    fn describe(&self, a: &GaussMatrix) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::matrix_index;
    use crate::numeric::{cantor_pair, pow2_neg, Q};
    use num_traits::One;

    #[test]
    fn scaled_identity_has_norm_inverse_p() {
        let r = RPresentation::new();
        let i2 = GaussMatrix::identity(2);
        let j = matrix_index(&i2).unwrap();
        let b = r.special_point(cantor_pair(3, j)).unwrap();
        let p = i2.opnorm_upper(3);
        assert!(p > Q::one());
        let iv = r.norm(&b, 10, 0).two_sided().unwrap();
        let target = p.recip();
        assert!(iv.contains(&target) && iv.width() <= pow2_neg(10));
    }

    #[test]
    fn special_points_are_in_the_unit_ball() {
        let r = RPresentation::new();
        for n in 0..300 {
            let b = r.special_point(n).unwrap();
            let m = (cantor_unpair(n).0 as u32).min(R_MAX_SQUARINGS);
            assert!(b.opnorm_upper(m) <= Q::one() + pow2_neg(30), "point {n}");
        }
    }

    #[test]
    fn mixed_sizes_combine() {
        let r = RPresentation::new();
        let a = GaussMatrix::identity(1);
        let b = GaussMatrix::parse("0, 1; 0, 0").unwrap();
        let c = r.mul(&a, &b).unwrap();
        assert_eq!(c.size(), 2);
        assert_eq!(c, b);
    }
}
