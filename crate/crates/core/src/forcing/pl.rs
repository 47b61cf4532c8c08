//! Quantifier-free metric sentences as piecewise-linear functions of the
//! pairwise distances.
//!
//! Each sentence gets two normal forms: `φ = min_β max E_β` (used for upper
//! bounds `φ < r`) and `φ = max_γ min F_γ` (used for lower bounds
//! `φ > s`). With `a = min_β max E_β` and `b = max_γ min F_γ`,
//! `a ∸ b = min_{β,γ} max({e - f} ∪ {0})`, and dually for the lower form,
//! so the only disjunctions are the branch lists themselves.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::ForcingError;
use crate::formula::{Formula, Term};
use crate::numeric::Q;

/// Pairwise distance variables over a sorted list of constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pub consts: Vec<u32>,
}

impl PairIndex {
    pub fn new(consts: impl IntoIterator<Item = u32>) -> Self {
        let set: BTreeSet<u32> = consts.into_iter().collect();
        PairIndex {
            consts: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }

    pub fn npairs(&self) -> usize {
        let n = self.len();
        n * n.saturating_sub(1) / 2
    }

    pub fn position(&self, c: u32) -> Option<usize> {
        self.consts.binary_search(&c).ok()
    }

    /// Variable of the pair at positions `a != b`.
    pub fn var(&self, a: usize, b: usize) -> usize {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        let n = self.len();
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    /// `(a, b)` positions of each variable, in variable order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lin {
    pub coeffs: BTreeMap<usize, Q>,
    pub constant: Q,
}

impl Lin {
    pub fn constant(c: Q) -> Lin {
        Lin {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: usize) -> Lin {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(v, Q::one());
        Lin {
            coeffs,
            constant: Q::zero(),
        }
    }

    pub fn scale(&self, s: &Q) -> Lin {
        if s.is_zero() {
            return Lin::constant(Q::zero());
        }
        Lin {
            coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * s)).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn sub(&self, other: &Lin) -> Lin {
        let mut coeffs = self.coeffs.clone();
        for (v, c) in &other.coeffs {
            let e = coeffs.entry(*v).or_insert_with(Q::zero);
            *e -= c;
            if e.is_zero() {
                coeffs.remove(v);
            }
        }
        Lin {
            coeffs,
            constant: &self.constant - &other.constant,
        }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coeffs.iter().fold(self.constant.clone(), |acc, (v, c)| acc + c * &x[*v])
    }
}

/// Branch lists of the two normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlForm {
    /// `φ = min over branches of max over the set`.
    pub upper: Vec<Vec<Lin>>,
    /// `φ = max over branches of min over the set`.
    pub lower: Vec<Vec<Lin>>,
}

fn dedup(sets: Vec<BTreeSet<Lin>>) -> Vec<Vec<Lin>> {
    let unique: BTreeSet<BTreeSet<Lin>> = sets.into_iter().collect();
    unique.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn constant_form(c: Q) -> PlForm {
    let l = vec![vec![Lin::constant(c)]];
    PlForm {
        upper: l.clone(),
        lower: l,
    }
}

fn term_position(t: &Term, idx: &PairIndex) -> Result<usize, ForcingError> {
    match t {
        Term::Fresh(c) => idx.position(*c).ok_or(ForcingError::UnknownConstant(*c)),
        other => Err(ForcingError::NonMetricSignature(format!("{other:?}"))),
    }
}

pub fn pl_form(phi: &Formula, idx: &PairIndex) -> Result<PlForm, ForcingError> {
    Ok(match phi {
        Formula::Atomic(p, args) => match (p.as_str(), args.as_slice()) {
            ("bot", []) => constant_form(Q::zero()),
            ("d", [a, b]) => {
                let (a, b) = (term_position(a, idx)?, term_position(b, idx)?);
                if a == b {
                    constant_form(Q::zero())
                } else {
                    let l = vec![vec![Lin::var(idx.var(a, b))]];
                    PlForm {
                        upper: l.clone(),
                        lower: l,
                    }
                }
            }
            _ => return Err(ForcingError::NonMetricSignature(p.clone())),
        },
        Formula::Zero(_) => constant_form(Q::zero()),
        Formula::One(_) => constant_form(Q::one()),
        Formula::Half(a) => {
            let f = pl_form(a, idx)?;
            let h = Q::new(1.into(), 2.into());
            let halve = |v: Vec<Vec<Lin>>| {
                v.into_iter()
                    .map(|s| s.into_iter().map(|l| l.scale(&h)).collect())
                    .collect()
            };
            PlForm {
                upper: halve(f.upper),
                lower: halve(f.lower),
            }
        }
        Formula::DotMinus(a, b) => {
            let (fa, fb) = (pl_form(a, idx)?, pl_form(b, idx)?);
            let mut upper = Vec::new();
            for ea in &fa.upper {
                for fbs in &fb.lower {
                    let mut set: BTreeSet<Lin> = BTreeSet::new();
                    set.insert(Lin::constant(Q::zero()));
                    for e in ea {
                        for f in fbs {
                            set.insert(e.sub(f));
                        }
                    }
                    upper.push(set);
                }
            }
            let mut lower = Vec::new();
            for fas in &fa.lower {
                for eb in &fb.upper {
                    let mut set = BTreeSet::new();
                    for f in fas {
                        for e in eb {
                            set.insert(f.sub(e));
                        }
                    }
                    lower.push(set);
                }
            }
            lower.push([Lin::constant(Q::zero())].into_iter().collect());
            PlForm {
                upper: dedup(upper),
                lower: dedup(lower),
            }
        }
        Formula::Sup(..) | Formula::Inf(..) => {
            return Err(ForcingError::NotQuantifierFree);
        }
    })
}

/// Exact value of a quantifier-free sentence at a distance vector.
pub fn pl_value(phi: &Formula, idx: &PairIndex, x: &[Q]) -> Result<Q, ForcingError> {
    Ok(match phi {
        Formula::Atomic(p, args) => match (p.as_str(), args.as_slice()) {
            ("bot", []) => Q::zero(),
            ("d", [a, b]) => {
                let (a, b) = (term_position(a, idx)?, term_position(b, idx)?);
                if a == b {
                    Q::zero()
                } else {
                    x[idx.var(a, b)].clone()
                }
            }
            _ => return Err(ForcingError::NonMetricSignature(p.clone())),
        },
        Formula::Zero(_) => Q::zero(),
        Formula::One(_) => Q::one(),
        Formula::Half(a) => pl_value(a, idx, x)? / Q::from_integer(2.into()),
        Formula::DotMinus(a, b) => {
            crate::numeric::dot_minus(&pl_value(a, idx, x)?, &pl_value(b, idx, x)?)
        }
        Formula::Sup(..) | Formula::Inf(..) => return Err(ForcingError::NotQuantifierFree),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{random_formula, RandomFormulaConfig, Signature};
    use crate::numeric::q_min;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normal_forms_agree_with_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sig = Signature::metric();
        let cfg = RandomFormulaConfig::new(4).sentences().quantifier_free();
        for _ in 0..200 {
            let phi = random_formula(&mut rng, &sig, &cfg);
            let idx = PairIndex::new(phi.fresh_constants().into_iter().chain([1, 2, 3]));
            let f = pl_form(&phi, &idx).unwrap();
            for _ in 0..5 {
                let x: Vec<Q> = (0..idx.npairs())
                    .map(|_| Q::new(rng.gen_range(0..=8).into(), 8.into()))
                    .collect();
                let v = pl_value(&phi, &idx, &x).unwrap();
                let up = f
                    .upper
                    .iter()
                    .map(|s| s.iter().map(|l| l.eval(&x)).max().unwrap())
                    .reduce(|a, b| q_min(&a, &b))
                    .unwrap();
                let lo = f
                    .lower
                    .iter()
                    .map(|s| s.iter().map(|l| l.eval(&x)).min().unwrap())
                    .max()
                    .unwrap();
                assert_eq!(up, v);
                assert_eq!(lo, v);
            }
        }
    }

    #[test]
    fn pair_variables_are_dense() {
        let idx = PairIndex::new([1, 4, 7, 9]);
        let pairs = idx.pairs();
        for (v, (a, b)) in pairs.iter().enumerate() {
            assert_eq!(idx.var(*a, *b), v);
            assert_eq!(idx.var(*b, *a), v);
        }
    }
}
