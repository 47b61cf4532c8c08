use std::collections::BTreeSet;

use serde::Serialize;

use super::{Formula, FormulaError, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Sup,
    Inf,
}

impl Quantifier {
    pub fn flip(self) -> Quantifier {
        match self {
            Quantifier::Sup => Quantifier::Inf,
            Quantifier::Inf => Quantifier::Sup,
        }
    }
}

/// Prenex prefix class. `ForallN(n)`: `n` alternation blocks starting
/// with `sup`; `ExistsN(n)` dually.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PrefixClass {
    QuantifierFree,
    ForallN(u32),
    ExistsN(u32),
}

impl PrefixClass {
    pub fn label(&self) -> String {
        match self {
            PrefixClass::QuantifierFree => "qf".into(),
            PrefixClass::ForallN(n) => format!("forall{n}"),
            PrefixClass::ExistsN(n) => format!("exists{n}"),
        }
    }

    pub fn parse(text: &str) -> Option<PrefixClass> {
        if text == "qf" {
            return Some(PrefixClass::QuantifierFree);
        }
        if let Some(n) = text.strip_prefix("forall") {
            return n.parse().ok().filter(|&n| n > 0).map(PrefixClass::ForallN);
        }
        if let Some(n) = text.strip_prefix("exists") {
            return n.parse().ok().filter(|&n| n > 0).map(PrefixClass::ExistsN);
        }
        None
    }
}

type Prefix = Vec<(Quantifier, String)>;

/// Deterministic fresh names `v1, v2, ...` avoiding every name in use.
struct NameGen {
    used: BTreeSet<String>,
    counter: usize,
}

impl NameGen {
    fn fresh(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("v{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

fn rename_in(prefix: &mut Prefix, matrix: &mut Formula, from: &str, to: &str) {
    for (_, v) in prefix.iter_mut() {
        if v == from {
            *v = to.to_string();
        }
    }
    *matrix = matrix.substitute(from, &Term::Var(to.to_string()));
}

fn pnf(phi: &Formula, names: &mut NameGen) -> (Prefix, Formula) {
    match phi {
        Formula::Atomic(..) => (vec![], phi.clone()),
        Formula::Zero(a) => {
            if a.is_quantifier_free() {
                (vec![], phi.clone())
            } else {
                (vec![], Formula::zero())
            }
        }
        Formula::One(a) => {
            if a.is_quantifier_free() {
                (vec![], phi.clone())
            } else {
                (vec![], Formula::one())
            }
        }
        Formula::Half(a) => {
            let (p, m) = pnf(a, names);
            (p, Formula::half(m))
        }
        Formula::Sup(x, a) | Formula::Inf(x, a) => {
            let q = if matches!(phi, Formula::Sup(..)) {
                Quantifier::Sup
            } else {
                Quantifier::Inf
            };
            let (mut p, mut m) = pnf(a, names);
            if p.iter().any(|(_, v)| v == x) {
                // the inner binding shadows x: give it a new name
                let fresh = names.fresh();
                rename_in(&mut p, &mut m, x, &fresh);
            }
            let mut prefix = vec![(q, x.clone())];
            prefix.extend(p);
            (prefix, m)
        }
        Formula::DotMinus(a, b) => {
            let fv_a = a.free_vars();
            let fv_b = b.free_vars();
            let (mut pa, mut ma) = pnf(a, names);
            let (mut pb, mut mb) = pnf(b, names);
            let right_vars: Vec<String> = pb.iter().map(|(_, v)| v.clone()).collect();
            for y in right_vars {
                if fv_a.contains(&y) || pa.iter().any(|(_, v)| *v == y) {
                    let fresh = names.fresh();
                    rename_in(&mut pb, &mut mb, &y, &fresh);
                }
            }
            let left_vars: Vec<String> = pa.iter().map(|(_, v)| v.clone()).collect();
            for x in left_vars {
                if fv_b.contains(&x) {
                    let fresh = names.fresh();
                    rename_in(&mut pa, &mut ma, &x, &fresh);
                }
            }
            let mut prefix = pa;
            prefix.extend(pb.into_iter().map(|(q, v)| (q.flip(), v)));
            (prefix, Formula::dm(ma, mb))
        }
    }
}

fn rebuild(prefix: &[(Quantifier, String)], matrix: Formula) -> Formula {
    prefix.iter().rev().fold(matrix, |body, (q, v)| match q {
        Quantifier::Sup => Formula::sup(v, body),
        Quantifier::Inf => Formula::inf(v, body),
    })
}

/// Equivalent formula with every quantifier outermost. Pull-out rules:
/// quantifiers leave the left of `∸` unchanged and flip on the right;
/// `Half` commutes with both; `Zero`/`One` drop a quantified argument.
/// Bound variables are renamed (`v1, v2, ...`) only on capture or
/// shadowing, so prenex input is returned unchanged.
pub fn prenex(phi: &Formula) -> Formula {
    let mut names = NameGen {
        used: phi.all_var_names(),
        counter: 0,
    };
    let (p, m) = pnf(phi, &mut names);
    rebuild(&p, m)
}

/// Splits a prenex formula into its prefix and quantifier-free matrix.
pub fn split_prenex(phi: &Formula) -> Result<(Vec<(Quantifier, String)>, Formula), FormulaError> {
    let mut prefix = Vec::new();
    let mut cur = phi;
    loop {
        match cur {
            Formula::Sup(x, body) => {
                prefix.push((Quantifier::Sup, x.clone()));
                cur = body;
            }
            Formula::Inf(x, body) => {
                prefix.push((Quantifier::Inf, x.clone()));
                cur = body;
            }
            _ => break,
        }
    }
    if !cur.is_quantifier_free() {
        return Err(FormulaError::NotPrenex);
    }
    Ok((prefix, cur.clone()))
}

pub fn classify_prefix(phi: &Formula) -> Result<PrefixClass, FormulaError> {
    let (prefix, _) = split_prenex(phi)?;
    let Some((first, _)) = prefix.first() else {
        return Ok(PrefixClass::QuantifierFree);
    };
    let blocks = 1 + prefix.windows(2).filter(|w| w[0].0 != w[1].0).count() as u32;
    Ok(match first {
        Quantifier::Sup => PrefixClass::ForallN(blocks),
        Quantifier::Inf => PrefixClass::ExistsN(blocks),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Term;

    fn dxc1() -> Formula {
        Formula::d(Term::var("x"), Term::c(1))
    }

    #[test]
    fn half_commutes_with_sup() {
        let f = Formula::half(Formula::sup("x", dxc1()));
        assert_eq!(prenex(&f), Formula::sup("x", Formula::half(dxc1())));
    }

    #[test]
    fn antitone_position_flips() {
        let dxx = Formula::d(Term::var("x"), Term::var("x"));
        let f = Formula::dm(Formula::one(), Formula::sup("x", dxx.clone()));
        assert_eq!(prenex(&f), Formula::inf("x", Formula::dm(Formula::one(), dxx)));
    }

    #[test]
    fn prenex_input_unchanged() {
        let f = Formula::sup(
            "x",
            Formula::inf("y", Formula::dm(dxc1(), Formula::d(Term::var("y"), Term::var("x")))),
        );
        assert_eq!(prenex(&f), f);
    }

    #[test]
    fn capture_is_renamed() {
        // sup_x d(x,c1) ∸ d(x,c2): the free x on the right forces a rename
        let f = Formula::dm(
            Formula::sup("x", dxc1()),
            Formula::d(Term::var("x"), Term::c(2)),
        );
        let p = prenex(&f);
        assert_eq!(
            p,
            Formula::sup(
                "v1",
                Formula::dm(
                    Formula::d(Term::var("v1"), Term::c(1)),
                    Formula::d(Term::var("x"), Term::c(2))
                )
            )
        );
    }

    #[test]
    fn classify_blocks() {
        let psi = Formula::d(Term::var("x"), Term::var("y"));
        assert_eq!(
            classify_prefix(&Formula::d(Term::c(1), Term::c(2))),
            Ok(PrefixClass::QuantifierFree)
        );
        assert_eq!(
            classify_prefix(&Formula::sup("x", Formula::inf("y", psi.clone()))),
            Ok(PrefixClass::ForallN(2))
        );
        assert_eq!(
            classify_prefix(&Formula::inf("x", Formula::inf("y", psi.clone()))),
            Ok(PrefixClass::ExistsN(1))
        );
        let below = Formula::half(Formula::sup("x", psi));
        assert_eq!(classify_prefix(&below), Err(FormulaError::NotPrenex));
    }

    #[test]
    fn zero_drops_quantified_argument() {
        let f = Formula::Zero(Box::new(Formula::sup("x", dxc1())));
        assert_eq!(prenex(&f), Formula::zero());
    }
}
