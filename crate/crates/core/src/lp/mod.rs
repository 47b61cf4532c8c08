//! Exact rational linear programming: dense two-phase simplex with
//! Bland's rule, so it always terminates. Variables are nonnegative.

use num_traits::{One, Signed, Zero};

use crate::numeric::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub cmp: Cmp,
    pub rhs: Q,
}

#[derive(Clone, Debug, Default)]
pub struct Lp {
    pub nvars: usize,
    pub constraints: Vec<Constraint>,
    /// Maximized.
    pub objective: Vec<(usize, Q)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Q>, value: Q },
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpResult::Infeasible)
    }
}

impl Lp {
    pub fn new(nvars: usize) -> Self {
        Lp {
            nvars,
            ..Lp::default()
        }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Q)>, cmp: Cmp, rhs: Q) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.nvars));
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn maximize(&mut self, objective: Vec<(usize, Q)>) {
        self.objective = objective;
    }

    pub fn solve(&self) -> LpResult {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
    /// First artificial column; columns from here on are artificial.
    art_start: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.constraints.len();
        let n = lp.nvars;
        let slacks = lp.constraints.iter().filter(|c| c.cmp != Cmp::Eq).count();
        // every row gets an artificial unless its slack can start basic
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        let art_start = n + slacks;
        let mut needs_art = Vec::new();
        let mut slack_col = n;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); art_start];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            let mut b = c.rhs.clone();
            let mut cmp = c.cmp;
            if b.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
                cmp = match cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
            match cmp {
                Cmp::Le => {
                    row[slack_col] = Q::one();
                    basis[i] = slack_col;
                    slack_col += 1;
                }
                Cmp::Ge => {
                    row[slack_col] = -Q::one();
                    slack_col += 1;
                    needs_art.push(i);
                }
                Cmp::Eq => needs_art.push(i),
            }
            rows.push(row);
            rhs.push(b);
        }
        let ncols = art_start + needs_art.len();
        for row in rows.iter_mut() {
            row.resize(ncols, Q::zero());
        }
        for (k, &i) in needs_art.iter().enumerate() {
            rows[i][art_start + k] = Q::one();
            basis[i] = art_start + k;
        }
        Tableau {
            rows,
            rhs,
            basis,
            ncols,
            art_start,
        }
    }

    fn pivot(&mut self, r: usize, s: usize, obj: &mut [Q], obj_val: &mut Q) {
        let p = self.rows[r][s].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..self.ncols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][s].is_zero() {
                continue;
            }
            let f = self.rows[i][s].clone();
            for &j in &nz {
                let d = &f * &pivot_row[j];
                self.rows[i][j] -= d;
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !obj[s].is_zero() {
            let f = obj[s].clone();
            *obj_val += &f * &pivot_rhs;
            for &j in &nz {
                obj[j] -= &f * &pivot_row[j];
            }
        }
        self.basis[r] = s;
    }

    /// Simplex iterations over columns `< limit`; false when unbounded.
    fn optimize(&mut self, obj: &mut [Q], obj_val: &mut Q, limit: usize) -> bool {
        loop {
            let Some(s) = (0..limit).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][s];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, s, obj, obj_val);
        }
    }

    fn run(mut self, lp: &Lp) -> LpResult {
        let m = self.rows.len();
        if self.ncols > self.art_start {
            // phase 1: maximize minus the sum of artificials
            let mut obj = vec![Q::zero(); self.ncols];
            let mut val = Q::zero();
            for i in 0..m {
                if self.basis[i] >= self.art_start {
                    for j in 0..self.art_start {
                        obj[j] += &self.rows[i][j];
                    }
                    val -= &self.rhs[i];
                }
            }
            self.optimize(&mut obj, &mut val, self.art_start);
            if val.is_negative() {
                return LpResult::Infeasible;
            }
            // drive remaining (zero-valued) artificials out of the basis
            let mut keep = vec![true; m];
            for i in 0..m {
                if self.basis[i] >= self.art_start {
                    match (0..self.art_start).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(s) => {
                            let mut dummy = vec![Q::zero(); self.ncols];
                            let mut dv = Q::zero();
                            self.pivot(i, s, &mut dummy, &mut dv);
                        }
                        None => keep[i] = false,
                    }
                }
            }
            let mut k = 0;
            self.rows.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            let mut k = 0;
            self.rhs.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            let mut k = 0;
            self.basis.retain(|_| {
                k += 1;
                keep[k - 1]
            });
        }
        let mut cost = vec![Q::zero(); self.ncols];
        for (j, c) in &lp.objective {
            cost[*j] += c;
        }
        let mut obj = cost.clone();
        let mut val = Q::zero();
        for i in 0..self.rows.len() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !self.rows[i][j].is_zero() {
                    obj[j] -= cb * &self.rows[i][j];
                }
            }
            val += cb * &self.rhs[i];
        }
        if !self.optimize(&mut obj, &mut val, self.art_start) {
            return LpResult::Unbounded;
        }
        let mut x = vec![Q::zero(); lp.nvars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < lp.nvars {
                x[b] = self.rhs[i].clone();
            }
        }
        LpResult::Optimal { x, value: val }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{q, qi};

    #[test]
    fn small_programs() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let mut lp = Lp::new(2);
        lp.add(vec![(0, qi(1)), (1, qi(2))], Cmp::Le, qi(4));
        lp.add(vec![(0, qi(3)), (1, qi(1))], Cmp::Le, qi(6));
        lp.maximize(vec![(0, qi(1)), (1, qi(1))]);
        assert_eq!(
            lp.solve(),
            LpResult::Optimal {
                x: vec![q(8, 5), q(6, 5)],
                value: q(14, 5)
            }
        );
        let mut inf = Lp::new(1);
        inf.add(vec![(0, qi(1))], Cmp::Ge, qi(2));
        inf.add(vec![(0, qi(1))], Cmp::Le, qi(1));
        assert_eq!(inf.solve(), LpResult::Infeasible);
        let mut unb = Lp::new(2);
        unb.add(vec![(0, qi(1)), (1, qi(-1))], Cmp::Le, qi(1));
        unb.maximize(vec![(0, qi(1))]);
        assert_eq!(unb.solve(), LpResult::Unbounded);
        // equality with a redundant copy and a negative right-hand side
        let mut eq = Lp::new(2);
        eq.add(vec![(0, qi(1)), (1, qi(1))], Cmp::Eq, qi(1));
        eq.add(vec![(0, qi(-2)), (1, qi(-2))], Cmp::Eq, qi(-2));
        eq.add(vec![(0, qi(-1))], Cmp::Le, q(-1, 4));
        eq.maximize(vec![(1, qi(1))]);
        assert_eq!(
            eq.solve(),
            LpResult::Optimal {
                x: vec![q(1, 4), q(3, 4)],
                value: q(3, 4)
            }
        );
    }

    #[test]
    fn degenerate_cycle_example_terminates() {
        // Beale's example cycles under the textbook rule
        let mut lp = Lp::new(4);
        lp.add(vec![(0, q(1, 4)), (1, qi(-60)), (2, q(-1, 25)), (3, qi(9))], Cmp::Le, qi(0));
        lp.add(vec![(0, q(1, 2)), (1, qi(-90)), (2, q(-1, 50)), (3, qi(3))], Cmp::Le, qi(0));
        lp.add(vec![(2, qi(1))], Cmp::Le, qi(1));
        lp.maximize(vec![(0, q(3, 4)), (1, qi(-150)), (2, q(1, 50)), (3, qi(-6))]);
        match lp.solve() {
            LpResult::Optimal { value, .. } => assert_eq!(value, q(1, 20)),
            other => panic!("{other:?}"),
        }
    }
}
