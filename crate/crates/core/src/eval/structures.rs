//! Concrete structures: finite metric test spaces and presentations.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};
use rand::Rng;

use super::{EvalError, Structure};
use crate::formula::Signature;
use crate::numeric::{q, q_min, GaussQ, Interval, Q};
use crate::presentation::{evaluate_point, rational_point, Presentation};

/// Finite metric space with exact rational distances in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestStructure {
    dist: Vec<Vec<Q>>,
    bindings: BTreeMap<u32, usize>,
}

impl TestStructure {
    /// Checks the metric axioms exactly.
    pub fn new(dist: Vec<Vec<Q>>) -> Result<Self, String> {
        let n = dist.len();
        if n == 0 {
            return Err("empty space".into());
        }
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {i} has {} entries", row.len()));
            }
            if !row[i].is_zero() {
                return Err(format!("d({i},{i}) != 0"));
            }
            for (j, v) in row.iter().enumerate() {
                if *v < Q::zero() || *v > Q::one() {
                    return Err(format!("d({i},{j}) outside [0,1]"));
                }
                if *v != dist[j][i] {
                    return Err(format!("d({i},{j}) not symmetric"));
                }
                if i != j && v.is_zero() {
                    return Err(format!("d({i},{j}) = 0"));
                }
                for k in 0..n {
                    if *v > &dist[i][k] + &dist[k][j] {
                        return Err(format!("triangle fails at {i},{k},{j}"));
                    }
                }
            }
        }
        Ok(TestStructure {
            dist,
            bindings: BTreeMap::new(),
        })
    }

    /// Points on a line with `d(a, b) = |a - b|`.
    pub fn line(points: &[Q]) -> Result<Self, String> {
        let dist = points
            .iter()
            .map(|a| points.iter().map(|b| num_traits::Signed::abs(&(a - b))).collect())
            .collect();
        Self::new(dist)
    }

    /// `n` points with every distance equal to `d`.
    pub fn uniform(n: usize, d: Q) -> Result<Self, String> {
        let dist = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Q::zero() } else { d.clone() }).collect())
            .collect();
        Self::new(dist)
    }

    /// Random space of `1..=max_points` points: random edge weights from a
    /// small dyadic/triadic grid, closed under shortest paths and capped at 1.
    pub fn random<R: Rng>(rng: &mut R, max_points: usize) -> Self {
        let n = rng.gen_range(1..=max_points.max(1));
        let grid = [q(1, 8), q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(3, 4), q(1, 1)];
        let mut dist = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = grid[rng.gen_range(0..grid.len())].clone();
                dist[i][j] = v.clone();
                dist[j][i] = v;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = &dist[i][k] + &dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        for row in dist.iter_mut() {
            for v in row.iter_mut() {
                *v = q_min(v, &Q::one());
            }
        }
        Self::new(dist).expect("shortest-path closure is a metric")
    }

    pub fn bind(mut self, c: u32, point: usize) -> Self {
        assert!(point < self.len(), "no such point");
        self.bindings.insert(c, point);
        self
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> &Q {
        &self.dist[i][j]
    }

    /// Point of `c_i`: the explicit binding, else point `(i - 1) mod n`.
    pub fn binding(&self, c: u32) -> Result<usize, EvalError> {
        Ok(self
            .bindings
            .get(&c)
            .copied()
            .unwrap_or((c as usize - 1) % self.len()))
    }
}

impl Structure for TestStructure {
    type Elem = usize;

    fn signature(&self) -> Signature {
        Signature::metric()
    }

    fn two_sided(&self) -> bool {
        true
    }

    fn finite_size(&self) -> Option<u64> {
        Some(self.len() as u64)
    }

    fn point(&self, index: u64) -> Result<usize, EvalError> {
        Ok(index as usize)
    }

    fn describe_point(&self, index: u64) -> String {
        format!("p{index}")
    }

    fn fresh(&self, i: u32) -> Result<usize, EvalError> {
        self.binding(i)
    }

    fn named(&self, name: &str) -> Result<usize, EvalError> {
        Err(EvalError::UnknownSymbol(name.into()))
    }

    fn apply(&self, f: &str, _args: &[usize]) -> Result<usize, EvalError> {
        Err(EvalError::UnknownSymbol(f.into()))
    }

    fn combine(&self, _: &GaussQ, _: &usize, _: &GaussQ, _: &usize) -> Result<usize, EvalError> {
        Err(EvalError::UnknownSymbol("comb".into()))
    }

    fn atom(&self, pred: &str, args: &[usize], _k: u32) -> Result<Interval, EvalError> {
        match pred {
            "bot" => Ok(Interval::point(Q::zero())),
            "d" => Ok(Interval::point(self.dist[args[0]][args[1]].clone())),
            other => Err(EvalError::UnknownSymbol(other.into())),
        }
    }
}

/// A presentation searched over its rational points. Fresh constants are
/// bound to rational-point indices.
pub struct PresentationStructure<P: Presentation> {
    pub presentation: P,
    bindings: BTreeMap<u32, u64>,
    /// Search budget passed to the norm oracle.
    pub norm_budget: usize,
    cache: Mutex<HashMap<u64, P::Elem>>,
}

impl<P: Presentation> PresentationStructure<P> {
    pub fn new(presentation: P) -> Self {
        PresentationStructure {
            presentation,
            bindings: BTreeMap::new(),
            norm_budget: 8,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn bind(mut self, c: u32, point: u64) -> Self {
        self.bindings.insert(c, point);
        self
    }

    pub fn with_norm_budget(mut self, budget: usize) -> Self {
        self.norm_budget = budget;
        self
    }

    fn tvna(&self) -> bool {
        self.presentation.signature().predicate("tr_re").is_some()
    }
}

impl<P: Presentation> Structure for PresentationStructure<P> {
    type Elem = P::Elem;

    fn signature(&self) -> Signature {
        self.presentation.signature()
    }

    fn two_sided(&self) -> bool {
        self.presentation.mode() == crate::presentation::CertificationMode::TwoSided
    }

    fn finite_size(&self) -> Option<u64> {
        None
    }

    fn point(&self, index: u64) -> Result<P::Elem, EvalError> {
        if let Some(e) = self.cache.lock().expect("cache lock").get(&index) {
            return Ok(e.clone());
        }
        let e = evaluate_point(&self.presentation, &rational_point(index))?;
        self.cache.lock().expect("cache lock").insert(index, e.clone());
        Ok(e)
    }

    fn describe_point(&self, index: u64) -> String {
        match self.point(index) {
            Ok(e) => format!("{} = {}", rational_point(index), self.presentation.describe(&e)),
            Err(err) => format!("{}: {err}", rational_point(index)),
        }
    }

    fn fresh(&self, i: u32) -> Result<P::Elem, EvalError> {
        let idx = *self.bindings.get(&i).ok_or(EvalError::UnboundConstant(i))?;
        self.point(idx)
    }

    fn named(&self, name: &str) -> Result<P::Elem, EvalError> {
        match name {
            "one" => Ok(self.presentation.unit()),
            other => Err(EvalError::UnknownSymbol(other.into())),
        }
    }

    fn apply(&self, f: &str, args: &[P::Elem]) -> Result<P::Elem, EvalError> {
        match (f, args) {
            ("mul", [a, b]) => Ok(self.presentation.mul(a, b)?),
            ("adj", [a]) => Ok(self.presentation.adjoint(a)),
            _ => Err(EvalError::UnknownSymbol(f.into())),
        }
    }

    fn combine(&self, l: &GaussQ, a: &P::Elem, m: &GaussQ, b: &P::Elem) -> Result<P::Elem, EvalError> {
        Ok(self.presentation.combine(l, a, m, b)?)
    }

    fn atom(&self, pred: &str, args: &[P::Elem], k: u32) -> Result<Interval, EvalError> {
        let half = Q::new(1.into(), 2.into());
        match (pred, args) {
            ("bot", []) => Ok(Interval::point(Q::zero())),
            ("d", [a, b]) => {
                // ½‖a - b‖ is the norm of the rounded combination ½a - ½b
                let diff = self.presentation.combine(
                    &GaussQ::real(half.clone()),
                    a,
                    &GaussQ::real(-half),
                    b,
                )?;
                Ok(self.presentation.norm(&diff, k, self.norm_budget).interval())
            }
            ("tr_re", [a]) | ("tr_im", [a]) if self.tvna() => {
                let t = self
                    .presentation
                    .trace(a)
                    .ok_or_else(|| EvalError::UnknownSymbol(pred.into()))?;
                let part = if pred == "tr_re" { t.re } else { t.im };
                Ok(Interval::point((Q::one() + part) * half))
            }
            _ => Err(EvalError::UnknownSymbol(pred.into())),
        }
    }
}
