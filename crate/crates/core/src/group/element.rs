//! Exact arithmetic in the group algebra `ℚ(i)Γ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::spec::{GroupSpec, Word};
use super::GroupError;
use crate::numeric::{sqrt_interval, GaussQ, Interval, Q};

/// Finitely supported map from normal forms to nonzero coefficients.
#[derive(Clone, Debug)]
pub struct GroupAlgebraElement {
    pub spec: Arc<GroupSpec>,
    pub terms: BTreeMap<Word, GaussQ>,
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec) && self.terms == other.terms
    }
}

fn accumulate(terms: &mut BTreeMap<Word, GaussQ>, w: Word, c: GaussQ) {
    use std::collections::btree_map::Entry;
    match terms.entry(w) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

impl GroupAlgebraElement {
    pub fn zero(spec: &Arc<GroupSpec>) -> Self {
        GroupAlgebraElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(spec: &Arc<GroupSpec>) -> Self {
        Self::monomial(spec, vec![], GaussQ::one())
    }

    /// `c·w`; `w` must already be a normal form.
    pub fn monomial(spec: &Arc<GroupSpec>, w: Word, c: GaussQ) -> Self {
        let mut e = Self::zero(spec);
        accumulate(&mut e.terms, w, c);
        e
    }

    /// Builds an element from arbitrary words, normalizing each.
    pub fn from_terms(
        spec: &Arc<GroupSpec>,
        terms: impl IntoIterator<Item = (Word, GaussQ)>,
    ) -> Result<Self, GroupError> {
        let mut e = Self::zero(spec);
        for (w, c) in terms {
            let nf = spec.normal_form(&w)?;
            accumulate(&mut e.terms, nf, c);
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_group(&self, other: &Self) -> Result<(), GroupError> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(GroupError::MixedGroups)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.add(&other.scale(&GaussQ::real(-Q::one())))
    }

    pub fn scale(&self, s: &GaussQ) -> Self {
        let mut out = Self::zero(&self.spec);
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        self.same_group(other)?;
        let mut out = Self::zero(&self.spec);
        for (v, a) in &self.terms {
            for (w, b) in &other.terms {
                accumulate(&mut out.terms, self.spec.multiply(v, w)?, a * b);
            }
        }
        Ok(out)
    }

    /// `Σ conj(c)·w⁻¹`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(&self.spec);
        for (w, c) in &self.terms {
            let inv = self.spec.inverse(w).expect("inverse of a normal form");
            accumulate(&mut out.terms, inv, c.conj());
        }
        out
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.adjoint().terms == self.terms
    }

    /// Coefficient of the identity.
    pub fn trace(&self) -> GaussQ {
        self.terms.get(&Vec::new()).cloned().unwrap_or_else(GaussQ::zero)
    }

    /// `τ(a*a) = Σ |c|²`, exact.
    pub fn trace_star_square(&self) -> Q {
        self.terms.values().map(GaussQ::modulus_sq).sum()
    }

    /// `Σ (|re| + |im|)`, an upper bound for the reduced C*-norm.
    pub fn l1_norm(&self) -> Q {
        self.terms.values().map(GaussQ::modulus_upper).sum()
    }

    /// Interval of width at most `2^-k` around `√τ(a*a)`.
    pub fn two_norm(&self, k: u32) -> Interval {
        sqrt_interval(&self.trace_star_square(), k)
    }

    /// Largest normal-form length in the support.
    pub fn max_length(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Parses sums such as `u + u^-1`, `1/2*u - (1/2+1/3i)*u*v^-1`, `e`.
    pub fn parse(spec: &Arc<GroupSpec>, text: &str) -> Result<Self, GroupError> {
        let mut out = Self::zero(spec);
        for (negative, term) in split_terms(text)? {
            let (coef, word) = split_coefficient(&term)?;
            let coef = if negative { -&coef } else { coef };
            let w = match word {
                Some(w) => spec.parse_word(&w)?,
                None => vec![],
            };
            let nf = spec.normal_form(&w)?;
            accumulate(&mut out.terms, nf, coef);
        }
        Ok(out)
    }
}

/// Splits at top-level `+`/`-`, keeping each term's sign.
fn split_terms(text: &str) -> Result<Vec<(bool, String)>, GroupError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut negative = false;
    let mut depth = 0i32;
    let mut last: Option<char> = None;
    let dangling = || GroupError::BadElement(format!("dangling sign in `{text}`"));
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        // signs inside parentheses or exponents stay with the term
        if depth == 0 && (ch == '+' || ch == '-') && last != Some('^') {
            if cur.trim().is_empty() {
                if last.is_some() {
                    return Err(dangling());
                }
            } else {
                out.push((negative, cur.trim().to_string()));
                cur.clear();
            }
            negative = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            last = Some(ch);
        }
    }
    if depth != 0 {
        return Err(GroupError::BadElement(format!("unbalanced parentheses in `{text}`")));
    }
    if cur.trim().is_empty() {
        return Err(if last.is_some() {
            dangling()
        } else {
            GroupError::BadElement("empty element".into())
        });
    }
    out.push((negative, cur.trim().to_string()));
    Ok(out)
}

fn parse_coefficient(text: &str) -> Result<GaussQ, GroupError> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(text);
    crate::parser::parse_gauss(inner).map_err(|_| GroupError::BadElement(format!("bad coefficient `{text}`")))
}

fn split_coefficient(term: &str) -> Result<(GaussQ, Option<String>), GroupError> {
    let term = term.trim();
    let starts_numeric = term.starts_with('(') || term.starts_with(|c: char| c.is_ascii_digit());
    if !starts_numeric {
        return Ok((GaussQ::one(), Some(term.to_string())));
    }
    let (coef, rest) = if term.starts_with('(') {
        let close = term.find(')').ok_or_else(|| GroupError::BadElement(term.to_string()))?;
        (&term[..=close], term[close + 1..].trim())
    } else {
        match term.find('*') {
            Some(i) => (&term[..i], term[i..].trim()),
            None => (term, ""),
        }
    };
    let c = parse_coefficient(coef.trim())?;
    if rest.is_empty() {
        return Ok((c, None));
    }
    let word = rest
        .strip_prefix('*')
        .ok_or_else(|| GroupError::BadElement(format!("expected `*` in `{term}`")))?;
    Ok((c, Some(word.trim().to_string())))
}

fn format_coefficient(c: &GaussQ) -> String {
    if c.is_real() {
        crate::numeric::fmt_ratio(&c.re)
    } else {
        format!("({c})")
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // shortlex order for printing
        let mut items: Vec<(&Word, &GaussQ)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            a.0.len().cmp(&b.0.len()).then_with(|| {
                let ka: Vec<usize> = a.0.iter().map(|&l| super::spec::letter_rank(l)).collect();
                let kb: Vec<usize> = b.0.iter().map(|&l| super::spec::letter_rank(l)).collect();
                ka.cmp(&kb)
            })
        });
        for (i, (w, c)) in items.into_iter().enumerate() {
            let negative_real = c.is_real() && c.re.is_negative();
            let shown = if negative_real { -c } else { c.clone() };
            if i > 0 {
                write!(f, "{}", if negative_real { " - " } else { " + " })?;
            } else if negative_real {
                write!(f, "-")?;
            }
            let word = self.spec.format_word(w);
            if shown.is_real() && shown.re.is_one() {
                write!(f, "{word}")?;
            } else if w.is_empty() {
                write!(f, "{}", format_coefficient(&shown))?;
            } else {
                write!(f, "{}*{word}", format_coefficient(&shown))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::numeric::q;
    use rand::{Rng, SeedableRng};

    fn f2() -> Arc<GroupSpec> {
        Arc::new(GroupSpec::free(&["u", "v"]))
    }

    fn random_element<R: Rng>(rng: &mut R, spec: &Arc<GroupSpec>) -> GroupAlgebraElement {
        let words = spec.normal_forms(40, 3).unwrap();
        let terms = (0..rng.gen_range(1..5)).map(|_| {
            let w = words[rng.gen_range(0..words.len())].clone();
            (w, GaussQ::new(q(rng.gen_range(-3..4), 2), q(rng.gen_range(-3..4), 3)))
        });
        GroupAlgebraElement::from_terms(spec, terms).unwrap()
    }

    #[test]
    fn algebra_laws() {
        let s = f2();
        let u = GroupAlgebraElement::parse(&s, "u").unwrap();
        let ui = GroupAlgebraElement::parse(&s, "u^-1").unwrap();
        assert_eq!(u.mul(&ui).unwrap(), GroupAlgebraElement::identity(&s));
        let iu = u.scale(&GaussQ::i());
        assert_eq!(iu.adjoint(), ui.scale(&GaussQ::new(q(0, 1), q(-1, 1))));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = random_element(&mut rng, &s);
            let b = random_element(&mut rng, &s);
            let c = random_element(&mut rng, &s);
            assert_eq!(a.adjoint().adjoint(), a);
            assert_eq!(a.mul(&b).unwrap().trace(), b.mul(&a).unwrap().trace());
            assert_eq!(a.mul(&b).unwrap().adjoint(), b.adjoint().mul(&a.adjoint()).unwrap());
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            assert_eq!(ab_c, a.mul(&b.mul(&c).unwrap()).unwrap());
            let lam = GaussQ::new(q(1, 2), q(2, 3));
            assert_eq!(a.scale(&lam).adjoint(), a.adjoint().scale(&lam.conj()));
            let tss = a.adjoint().mul(&a).unwrap().trace();
            assert!(tss.is_real() && tss.re.is_positive());
            assert_eq!(tss.re, a.trace_star_square());
        }
        assert!(GroupAlgebraElement::zero(&s).trace_star_square().is_zero());
    }

    #[test]
    fn norms_and_traces() {
        let z = Arc::new(GroupSpec::integers());
        let e = GroupAlgebraElement::identity(&z);
        assert_eq!(e.trace(), GaussQ::one());
        assert_eq!(e.l1_norm(), q(1, 1));
        assert_eq!(e.two_norm(10), Interval::point(q(1, 1)));
        let a = GroupAlgebraElement::parse(&z, "u + u^-1").unwrap();
        assert!(a.trace().is_zero());
        assert!(a.two_norm(20).contains(&q(14142135, 10000000)));
        assert!(a.l1_norm() <= q(2, 1));
        let iu = GroupAlgebraElement::parse(&z, "(0+1i)*u").unwrap();
        assert!(iu.l1_norm() <= q(1, 1));
        assert_eq!(GroupAlgebraElement::zero(&z).two_norm(5), Interval::point(q(0, 1)));
    }

    #[test]
    fn parse_and_print() {
        let s = f2();
        let a = GroupAlgebraElement::parse(&s, "1/2*u + (1/2+1/3i)*u*v^-1 - 3 + u^2").unwrap();
        assert_eq!(a.to_string(), "-3 + 1/2*u + u^2 + (1/2+1/3i)*u*v^-1");
        assert_eq!(GroupAlgebraElement::parse(&s, &a.to_string()).unwrap(), a);
        let b = GroupAlgebraElement::parse(&s, "u - u").unwrap();
        assert!(b.is_zero());
        assert!(GroupAlgebraElement::parse(&s, "u + w").is_err());
        assert!(GroupAlgebraElement::parse(&s, "u +").is_err());
        let c = GroupAlgebraElement::parse(&s, "-u^-1 + e").unwrap();
        assert_eq!(c.to_string(), "e - u^-1");
    }
}
