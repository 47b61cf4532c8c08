//! Exact feasibility for finite sets of strict bounds over `[0,1]`-valued
//! pseudometrics. Branch choices are searched depth-first; every leaf is a
//! linear program whose margin variable `t` measures strictness. Triangle
//! inequalities enter lazily as cuts.

use num_traits::{One, Zero};

use super::pl::{Lin, PairIndex};
use crate::lp::{Cmp, Lp, LpResult};
use crate::numeric::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sense {
    /// `φ < r`: every expression of the chosen upper branch is below `r`.
    Below(Q),
    /// `φ > s`: every expression of the chosen lower branch is above `s`.
    Above(Q),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub branches: Vec<Vec<Lin>>,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub index: PairIndex,
    pub items: Vec<Item>,
}

/// A feasible cell: one branch per item, its best margin and a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub choice: Vec<usize>,
    pub margin: Q,
    pub point: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Feasible(Cell),
    Infeasible,
    /// The LP budget ran out first.
    Exhausted,
}

/// Optimization target over a cell.
#[derive(Clone, Debug)]
pub enum Objective {
    /// Maximize the margin `t`.
    Margin,
    /// Maximize `min F` with the margin held at least `t0`.
    MaxMin(Vec<Lin>, Q),
    /// Minimize `max E` with the margin held at least `t0`.
    MinMax(Vec<Lin>, Q),
}

/// Counts LP solves so callers can bound work.
#[derive(Clone, Debug)]
pub struct Work {
    pub remaining: usize,
}

impl Work {
    pub fn new(limit: usize) -> Self {
        Work { remaining: limit }
    }
}

/// Default LP budget for one query.
pub const DEFAULT_LP_BUDGET: usize = 20_000;

struct Builder<'a> {
    index: &'a PairIndex,
    items: &'a [Item],
}

impl Builder<'_> {
    /// Variables: pair distances, then `t`, then `z` when needed.
    fn lp(&self, choice: &[usize], objective: &Objective, cuts: &[(usize, usize, usize)]) -> Lp {
        let np = self.index.npairs();
        let t = np;
        let z = np + 1;
        let mut lp = Lp::new(np + 2);
        for v in 0..np {
            lp.add(vec![(v, Q::one())], Cmp::Le, Q::one());
        }
        lp.add(vec![(t, Q::one())], Cmp::Le, Q::one());
        lp.add(vec![(z, Q::one())], Cmp::Le, Q::one());
        for (item, &b) in self.items.iter().zip(choice) {
            for l in &item.branches[b] {
                let mut coeffs: Vec<(usize, Q)> = l.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect();
                match &item.sense {
                    Sense::Below(r) => {
                        coeffs.push((t, Q::one()));
                        lp.add(coeffs, Cmp::Le, r - &l.constant);
                    }
                    Sense::Above(s) => {
                        coeffs.push((t, -Q::one()));
                        lp.add(coeffs, Cmp::Ge, s - &l.constant);
                    }
                }
            }
        }
        for &(a, b, c) in cuts {
            // d(a,b) <= d(a,c) + d(c,b)
            let mut coeffs = vec![(self.index.var(a, b), Q::one())];
            coeffs.push((self.index.var(a, c), -Q::one()));
            coeffs.push((self.index.var(c, b), -Q::one()));
            lp.add(coeffs, Cmp::Le, Q::zero());
        }
        match objective {
            Objective::Margin => lp.maximize(vec![(t, Q::one())]),
            Objective::MaxMin(fs, t0) => {
                lp.add(vec![(t, Q::one())], Cmp::Ge, t0.clone());
                for f in fs {
                    // z <= f
                    let mut coeffs: Vec<(usize, Q)> = f.coeffs.iter().map(|(v, c)| (*v, -c.clone())).collect();
                    coeffs.push((z, Q::one()));
                    lp.add(coeffs, Cmp::Le, f.constant.clone());
                }
                lp.maximize(vec![(z, Q::one())]);
            }
            Objective::MinMax(es, t0) => {
                lp.add(vec![(t, Q::one())], Cmp::Ge, t0.clone());
                for e in es {
                    // z >= e
                    let mut coeffs: Vec<(usize, Q)> = e.coeffs.iter().map(|(v, c)| (*v, -c.clone())).collect();
                    coeffs.push((z, Q::one()));
                    lp.add(coeffs, Cmp::Ge, e.constant.clone());
                }
                lp.maximize(vec![(z, -Q::one())]);
            }
        }
        lp
    }
}

fn violated_triangles(index: &PairIndex, x: &[Q]) -> Vec<(usize, usize, usize)> {
    let n = index.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in 0..n {
                if c == a || c == b {
                    continue;
                }
                let lhs = &x[index.var(a, b)];
                let rhs = &x[index.var(a, c)] + &x[index.var(c, b)];
                if *lhs > rhs {
                    out.push((a, b, c));
                }
            }
        }
    }
    out
}

/// Solves with lazily added triangle cuts; `None` when infeasible or the
/// budget is gone (`work.remaining == 0` tells them apart).
fn solve_lazy(
    region: &Region,
    choice: &[usize],
    objective: &Objective,
    cuts: &mut Vec<(usize, usize, usize)>,
    extra: &[(Vec<(usize, Q)>, Cmp, Q)],
    work: &mut Work,
) -> Option<(Q, Vec<Q>)> {
    let builder = Builder {
        index: &region.index,
        items: &region.items,
    };
    loop {
        if work.remaining == 0 {
            return None;
        }
        work.remaining -= 1;
        let mut lp = builder.lp(choice, objective, cuts);
        for (c, cmp, r) in extra {
            lp.add(c.clone(), *cmp, r.clone());
        }
        match lp.solve() {
            LpResult::Optimal { x, value } => {
                let np = region.index.npairs();
                let new = violated_triangles(&region.index, &x[..np]);
                if new.is_empty() {
                    return Some((value, x));
                }
                cuts.extend(new);
            }
            LpResult::Infeasible | LpResult::Unbounded => return None,
        }
    }
}

impl Region {
    pub fn new(index: PairIndex) -> Self {
        Region {
            index,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, branches: Vec<Vec<Lin>>, sense: Sense) {
        self.items.push(Item { branches, sense });
    }

    /// Item order for the search: fewest branches first, ties by position.
    fn order(&self) -> Vec<usize> {
        let mut ord: Vec<usize> = (0..self.items.len()).collect();
        ord.sort_by_key(|&i| self.items[i].branches.len());
        ord
    }

    fn partial(&self, ord: &[usize], chosen: &[usize]) -> (Region, Vec<usize>) {
        let items = ord[..chosen.len()].iter().map(|&i| self.items[i].clone()).collect();
        (
            Region {
                index: self.index.clone(),
                items,
            },
            chosen.to_vec(),
        )
    }

    /// First cell (in search order) where all bounds hold strictly.
    pub fn strict_search(&self, work: &mut Work) -> Search {
        self.search(work, true)
    }

    /// Every cell of the closed region, in search order.
    pub fn closed_cells(&self, work: &mut Work) -> Option<Vec<Vec<usize>>> {
        let ord = self.order();
        let mut out = Vec::new();
        let mut cuts = Vec::new();
        let mut stack = vec![Vec::<usize>::new()];
        while let Some(chosen) = stack.pop() {
            let (sub, ch) = self.partial(&ord, &chosen);
            let ok = solve_lazy(&sub, &ch, &Objective::Margin, &mut cuts, &[], work);
            if ok.is_none() {
                if work.remaining == 0 {
                    return None;
                }
                continue;
            }
            if chosen.len() == ord.len() {
                out.push(self.unpermute(&ord, &chosen));
                continue;
            }
            let nb = self.items[ord[chosen.len()]].branches.len();
            for b in (0..nb).rev() {
                let mut next = chosen.clone();
                next.push(b);
                stack.push(next);
            }
        }
        Some(out)
    }

    fn unpermute(&self, ord: &[usize], chosen: &[usize]) -> Vec<usize> {
        let mut choice = vec![0; self.items.len()];
        for (pos, &i) in ord.iter().enumerate() {
            choice[i] = chosen[pos];
        }
        choice
    }

    fn search(&self, work: &mut Work, strict: bool) -> Search {
        let ord = self.order();
        let mut cuts = Vec::new();
        let mut stack = vec![Vec::<usize>::new()];
        while let Some(chosen) = stack.pop() {
            let (sub, ch) = self.partial(&ord, &chosen);
            let res = solve_lazy(&sub, &ch, &Objective::Margin, &mut cuts, &[], work);
            let Some((t, x)) = res else {
                if work.remaining == 0 {
                    return Search::Exhausted;
                }
                continue;
            };
            if strict && t.is_zero() {
                continue;
            }
            if chosen.len() == ord.len() {
                let np = self.index.npairs();
                return Search::Feasible(Cell {
                    choice: self.unpermute(&ord, &chosen),
                    margin: t,
                    point: x[..np].to_vec(),
                });
            }
            let nb = self.items[ord[chosen.len()]].branches.len();
            for b in (0..nb).rev() {
                let mut next = chosen.clone();
                next.push(b);
                stack.push(next);
            }
        }
        Search::Infeasible
    }

    /// Optimum of `objective` over one cell; returns the value in the
    /// objective's natural sign and the distance vector.
    pub fn optimize(&self, choice: &[usize], objective: &Objective, work: &mut Work) -> Option<(Q, Vec<Q>)> {
        let mut cuts = Vec::new();
        let (v, x) = solve_lazy(self, choice, objective, &mut cuts, &[], work)?;
        let np = self.index.npairs();
        let v = match objective {
            Objective::MinMax(..) => -v,
            _ => v,
        };
        Some((v, x[..np].to_vec()))
    }

    /// Lexicographically least distance vector in the cell with margin at
    /// least `t0`.
    pub fn lexmin(&self, choice: &[usize], t0: &Q, work: &mut Work) -> Option<Vec<Q>> {
        let np = self.index.npairs();
        let mut cuts = Vec::new();
        let mut fixed: Vec<(Vec<(usize, Q)>, Cmp, Q)> = vec![(vec![(np, Q::one())], Cmp::Ge, t0.clone())];
        let mut last = None;
        for v in 0..np {
            let objective = Objective::MinMax(vec![Lin::var(v)], t0.clone());
            let (val, x) = solve_lazy(self, choice, &objective, &mut cuts, &fixed, work)?;
            let val = -val;
            fixed.push((vec![(v, Q::one())], Cmp::Eq, val));
            last = Some(x[..np].to_vec());
        }
        match last {
            Some(x) => Some(x),
            None => {
                let (_, x) = solve_lazy(self, choice, &Objective::Margin, &mut cuts, &fixed, work)?;
                Some(x[..np].to_vec())
            }
        }
    }
}

/// Pseudometric axioms on a distance vector, checked exactly.
pub fn is_pseudometric(index: &PairIndex, x: &[Q]) -> bool {
    x.iter().all(|v| *v >= Q::zero() && *v <= Q::one()) && violated_triangles(index, x).is_empty()
}
