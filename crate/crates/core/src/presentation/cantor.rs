//! `C(2^ω)` through locally constant functions on cylinders.

use num_traits::One;

use super::{CertificationMode, NormReport, Presentation, PresentationError};
use crate::formula::Signature;
use crate::numeric::{gauss_rational_at, q_max, sqrt_interval, tuple_unrank, GaussQ, Q};

/// Deepest cylinder level produced by the enumeration.
pub const MAX_CYLINDER_DEPTH: u32 = 12;

/// Function constant on each cylinder of length `depth`; `values[i]` is
/// the value on the cylinder whose bits, most significant first, spell `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyConstant {
    pub depth: u32,
    pub values: Vec<GaussQ>,
}

impl LocallyConstant {
    pub fn constant(c: GaussQ) -> Self {
        LocallyConstant { depth: 0, values: vec![c] }
    }

    pub fn new(depth: u32, values: Vec<GaussQ>) -> Self {
        assert_eq!(values.len(), 1usize << depth, "need 2^depth values");
        LocallyConstant { depth, values }
    }

    /// Indicator of the cylinder spelled by `bits` ('0'/'1').
    pub fn indicator(bits: &str) -> Self {
        let depth = bits.len() as u32;
        let target = usize::from_str_radix(bits, 2).unwrap_or(0);
        let values = (0..1usize << depth)
            .map(|i| if i == target { GaussQ::one() } else { GaussQ::zero() })
            .collect();
        LocallyConstant { depth, values }
    }

    pub fn refine_to(&self, depth: u32) -> Self {
        let shift = depth - self.depth;
        let values = (0..1usize << depth).map(|i| self.values[i >> shift].clone()).collect();
        LocallyConstant { depth, values }
    }

    fn zip(&self, other: &Self, f: impl Fn(&GaussQ, &GaussQ) -> GaussQ) -> Self {
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.refine_to(depth), other.refine_to(depth));
        let values = a.values.iter().zip(&b.values).map(|(x, y)| f(x, y)).collect();
        LocallyConstant { depth, values }
    }

    pub fn max_modulus_sq(&self) -> Q {
        self.values.iter().map(GaussQ::modulus_sq).fold(Q::from_integer(0.into()), |m, v| q_max(&m, &v))
    }
}

/// Special point 0 is the constant `1`; point `n >= 1` has depth `d` and
/// values `gauss_rational_at(tuple_unrank(j, 2^d))` where
/// `n = 2^d (2j + 1)`. Values beyond the unit disc are divided by the
/// largest `|re| + |im|`.
#[derive(Clone, Debug, Default)]
pub struct C2wPresentation;

impl C2wPresentation {
    pub fn new() -> Self {
        C2wPresentation
    }
}

impl Presentation for C2wPresentation {
    type Elem = LocallyConstant;

    fn name(&self) -> String {
        "C2w".into()
    }

    fn mode(&self) -> CertificationMode {
        CertificationMode::TwoSided
    }

    fn signature(&self) -> Signature {
        Signature::cstar()
    }

    fn special_point(&self, n: u64) -> Result<LocallyConstant, PresentationError> {
        if n == 0 {
            return Ok(LocallyConstant::constant(GaussQ::one()));
        }
        let d = n.trailing_zeros();
        if d > MAX_CYLINDER_DEPTH {
            return Err(PresentationError::TooLarge(n));
        }
        let j = (n >> d) / 2;
        let values: Vec<GaussQ> = tuple_unrank(j, 1usize << d).into_iter().map(gauss_rational_at).collect();
        let f = LocallyConstant { depth: d, values };
        if f.max_modulus_sq() <= Q::one() {
            return Ok(f);
        }
        let s = f
            .values
            .iter()
            .map(GaussQ::modulus_upper)
            .fold(Q::one(), |m, v| q_max(&m, &v))
            .recip();
        Ok(LocallyConstant {
            depth: d,
            values: f.values.iter().map(|v| v.scale(&s)).collect(),
        })
    }

    fn unit(&self) -> LocallyConstant {
        LocallyConstant::constant(GaussQ::one())
    }

    fn mul(&self, a: &LocallyConstant, b: &LocallyConstant) -> Result<LocallyConstant, PresentationError> {
        Ok(a.zip(b, |x, y| x * y))
    }

    fn adjoint(&self, a: &LocallyConstant) -> LocallyConstant {
        LocallyConstant {
            depth: a.depth,
            values: a.values.iter().map(GaussQ::conj).collect(),
        }
    }

    fn combine(
        &self,
        l: &GaussQ,
        a: &LocallyConstant,
        m: &GaussQ,
        b: &LocallyConstant,
    ) -> Result<LocallyConstant, PresentationError> {
        Ok(a.zip(b, |x, y| &(l * x) + &(m * y)))
    }

    fn norm(&self, a: &LocallyConstant, k: u32, _budget: usize) -> NormReport {
        let iv = sqrt_interval(&a.max_modulus_sq(), k);
        NormReport::TwoSided { lo: iv.lo, hi: iv.hi }
    }

    fn describe(&self, a: &LocallyConstant) -> String {
        let vals: Vec<String> = a.values.iter().map(|v| v.to_string()).collect();
        format!("depth {}: [{}]", a.depth, vals.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    #[test]
    fn rotated_cylinder_indicator_has_norm_one() {
        let c = C2wPresentation::new();
        let f = LocallyConstant::indicator("01");
        let z = GaussQ::new(q(3, 5), q(4, 5));
        let g = c.combine(&z, &f, &GaussQ::zero(), &c.unit()).unwrap();
        assert_eq!(g.max_modulus_sq(), Q::one());
        let iv = c.norm(&g, 10, 0).two_sided().unwrap();
        assert_eq!(iv.lo, Q::one());
    }

    #[test]
    fn special_points_stay_in_the_unit_ball() {
        let c = C2wPresentation::new();
        assert_eq!(c.special_point(0).unwrap(), c.unit());
        for n in 0..500 {
            assert!(c.special_point(n).unwrap().max_modulus_sq() <= Q::one());
        }
        assert_eq!(c.special_point(6).unwrap(), LocallyConstant::indicator("1"));
        assert_eq!(c.special_point(10).unwrap(), LocallyConstant::indicator("0"));
    }
}
