//! Group presentations: `L(Γ)` in the trace 2-norm and `C*_λ(Γ)` in the
//! reduced operator norm. Both use `ℓ¹`-normalized special points.

use std::sync::Arc;

use num_traits::Zero;

use super::torus::torus_sup_norm;
use super::{shrink_factor, CertificationMode, NormReport, Presentation, PresentationError};
use crate::formula::Signature;
use crate::group::{
    lambda_norm_lower, Backend, GroupAlgebraElement, GroupAlgebraEnumerator, GroupSpec,
};
use crate::numeric::{nth_root_ceil, nth_root_floor, pow2_neg, q_min, GaussQ, Q};

/// Squarings tried by the finite-group two-sided bound.
const FINITE_MAX_SQUARINGS: u32 = 16;

struct GroupPoints {
    spec: Arc<GroupSpec>,
    enumerator: GroupAlgebraEnumerator,
}

impl GroupPoints {
    fn new(spec: GroupSpec) -> Self {
        let spec = Arc::new(spec);
        GroupPoints {
            enumerator: GroupAlgebraEnumerator::new(spec.clone()),
            spec,
        }
    }

    fn special(&self, n: u64) -> Result<GroupAlgebraElement, PresentationError> {
        let g = self.enumerator.element(n)?;
        let s = shrink_factor(&g.l1_norm());
        Ok(g.scale(&GaussQ::real(s)))
    }

    fn unit(&self) -> GroupAlgebraElement {
        GroupAlgebraElement::identity(&self.spec)
    }

    fn combine(
        l: &GaussQ,
        a: &GroupAlgebraElement,
        m: &GaussQ,
        b: &GroupAlgebraElement,
    ) -> Result<GroupAlgebraElement, PresentationError> {
        Ok(a.scale(l).add(&b.scale(m))?)
    }
}

/// `L(Γ)` with `‖a‖₂ = √τ(a*a)`.
pub struct GroupVnaPresentation {
    points: GroupPoints,
}

impl GroupVnaPresentation {
    pub fn new(spec: GroupSpec) -> Self {
        GroupVnaPresentation {
            points: GroupPoints::new(spec),
        }
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.points.spec
    }
}

impl Presentation for GroupVnaPresentation {
    type Elem = GroupAlgebraElement;

    fn name(&self) -> String {
        format!("L({})", self.points.spec.backend_name())
    }

    fn mode(&self) -> CertificationMode {
        CertificationMode::TwoSided
    }

    fn signature(&self) -> Signature {
        Signature::tvna()
    }

    fn special_point(&self, n: u64) -> Result<GroupAlgebraElement, PresentationError> {
        self.points.special(n)
    }

    fn unit(&self) -> GroupAlgebraElement {
        self.points.unit()
    }

    fn mul(
        &self,
        a: &GroupAlgebraElement,
        b: &GroupAlgebraElement,
    ) -> Result<GroupAlgebraElement, PresentationError> {
        Ok(a.mul(b)?)
    }

    fn adjoint(&self, a: &GroupAlgebraElement) -> GroupAlgebraElement {
        a.adjoint()
    }

    fn combine(
        &self,
        l: &GaussQ,
        a: &GroupAlgebraElement,
        m: &GaussQ,
        b: &GroupAlgebraElement,
    ) -> Result<GroupAlgebraElement, PresentationError> {
        GroupPoints::combine(l, a, m, b)
    }

    fn norm(&self, a: &GroupAlgebraElement, k: u32, _budget: usize) -> NormReport {
        let iv = a.two_norm(k);
        NormReport::TwoSided { lo: iv.lo, hi: iv.hi }
    }

    fn trace(&self, a: &GroupAlgebraElement) -> Option<GaussQ> {
        Some(a.trace())
    }

    fn describe(&self, a: &GroupAlgebraElement) -> String {
        a.to_string()
    }
}

/// `C*_λ(Γ)`. Lower bounds come from moments `τ((a*a)^n)^(1/2n)` with
/// `n <= budget`, and `ℓ¹` is the global upper bound. Free abelian groups
/// are two-sided through the torus, finite groups through
/// `(|Γ|·τ(h^N))^(1/2N) >= ‖a‖` for `h = a*a`.
pub struct CstarLambdaPresentation {
    points: GroupPoints,
}

impl CstarLambdaPresentation {
    pub fn new(spec: GroupSpec) -> Self {
        CstarLambdaPresentation {
            points: GroupPoints::new(spec),
        }
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.points.spec
    }

    pub fn moment_lower(&self, a: &GroupAlgebraElement, k: u32, budget: usize) -> Q {
        (1..=budget.max(1))
            .filter_map(|n| lambda_norm_lower(a, n, k).ok())
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// Two-sided bound for a finite group of order `order`, or `None` when
/// the squarings run out before the width drops to `2^-k`.
pub fn finite_group_norm(a: &GroupAlgebraElement, order: usize, k: u32) -> Option<(Q, Q)> {
    let h = a.adjoint().mul(a).ok()?;
    if h.is_zero() {
        return Some((Q::zero(), Q::zero()));
    }
    let order = Q::from_integer(order.into());
    let cap = a.l1_norm();
    let mut p = h;
    for j in 0..=FINITE_MAX_SQUARINGS {
        let root = 1u32 << (j + 1);
        let m = p.trace().re;
        let lo = nth_root_floor(&m, root, k + 1);
        let hi = q_min(&nth_root_ceil(&(&m * &order), root, k + 1), &cap);
        if &hi - &lo <= pow2_neg(k) {
            return Some((lo, hi));
        }
        p = p.mul(&p).ok()?;
    }
    None
}

impl Presentation for CstarLambdaPresentation {
    type Elem = GroupAlgebraElement;

    fn name(&self) -> String {
        format!("CstarLambda({})", self.points.spec.backend_name())
    }

    fn mode(&self) -> CertificationMode {
        let spec = &self.points.spec;
        if matches!(spec.backend, Backend::FreeAbelian) || spec.order().is_some() {
            CertificationMode::TwoSided
        } else {
            CertificationMode::LowerOnly
        }
    }

    fn signature(&self) -> Signature {
        Signature::cstar()
    }

    fn special_point(&self, n: u64) -> Result<GroupAlgebraElement, PresentationError> {
        self.points.special(n)
    }

    fn unit(&self) -> GroupAlgebraElement {
        self.points.unit()
    }

    fn mul(
        &self,
        a: &GroupAlgebraElement,
        b: &GroupAlgebraElement,
    ) -> Result<GroupAlgebraElement, PresentationError> {
        Ok(a.mul(b)?)
    }

    fn adjoint(&self, a: &GroupAlgebraElement) -> GroupAlgebraElement {
        a.adjoint()
    }

    fn combine(
        &self,
        l: &GaussQ,
        a: &GroupAlgebraElement,
        m: &GaussQ,
        b: &GroupAlgebraElement,
    ) -> Result<GroupAlgebraElement, PresentationError> {
        GroupPoints::combine(l, a, m, b)
    }

    fn norm(&self, a: &GroupAlgebraElement, k: u32, budget: usize) -> NormReport {
        let spec = &self.points.spec;
        if let Some(order) = spec.order() {
            if let Some((lo, hi)) = finite_group_norm(a, order, k) {
                return NormReport::TwoSided { lo, hi };
            }
        } else if matches!(spec.backend, Backend::FreeAbelian) {
            let (lo, hi) = torus_sup_norm(a, k);
            return NormReport::TwoSided { lo, hi };
        }
        let lower = self.moment_lower(a, k, budget);
        let global_upper = a.l1_norm();
        NormReport::LowerOnly { lower, global_upper }
    }

    fn describe(&self, a: &GroupAlgebraElement) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{q, sqrt_interval, to_f64};
    use num_traits::One;

    #[test]
    fn special_points_are_l1_normalized() {
        let l = GroupVnaPresentation::new(GroupSpec::free(&["u", "v"]));
        for n in 0..200 {
            assert!(l.special_point(n).unwrap().l1_norm() <= Q::one());
        }
    }

    #[test]
    fn cyclic_projection_has_norm_one() {
        let c = CstarLambdaPresentation::new(GroupSpec::cyclic(2));
        let spec = c.spec().clone();
        let a = GroupAlgebraElement::parse(&spec, "1/2*e + 1/2*a").unwrap();
        let r = c.norm(&a, 10, 4);
        let iv = r.two_sided().unwrap();
        assert!(iv.contains(&Q::one()));
        assert!(iv.width() <= pow2_neg(10));
    }

    #[test]
    fn free_group_lower_bounds_increase_towards_sqrt3_over_2() {
        let c = CstarLambdaPresentation::new(GroupSpec::free(&["u", "v"]));
        let spec = c.spec().clone();
        let a = GroupAlgebraElement::parse(&spec, "1/4*u + 1/4*u^-1 + 1/4*v + 1/4*v^-1").unwrap();
        assert_eq!(c.mode(), CertificationMode::LowerOnly);
        let target = sqrt_interval(&q(3, 4), 30).hi;
        let mut prev = Q::zero();
        for budget in [2usize, 4, 8, 12] {
            match c.norm(&a, 20, budget) {
                NormReport::LowerOnly { lower, global_upper } => {
                    assert!(lower >= prev && lower <= target);
                    assert_eq!(global_upper, Q::one());
                    prev = lower;
                }
                other => panic!("unexpected {other}"),
            }
        }
        assert!(to_f64(&prev) > 0.7);
    }

    #[test]
    fn l2_norm_is_exact_coefficient_norm() {
        let l = GroupVnaPresentation::new(GroupSpec::free(&["u", "v"]));
        let spec = l.spec().clone();
        let a = GroupAlgebraElement::parse(&spec, "3/5*u + 4/5i*v").unwrap();
        let iv = l.norm(&a, 12, 0).two_sided().unwrap();
        assert!(iv.contains(&Q::one()));
    }
}
