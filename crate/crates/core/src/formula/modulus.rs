//! Moduli of uniform continuity as index-to-index maps: `m(k)` is the
//! precision exponent an input must meet for the output to move by at most
//! `2^-k`.

use super::{Formula, Signature, SymbolModulus, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Modulus {
    /// Value does not depend on the variable.
    Constant,
    Identity,
    /// `k -> inner(max(k + shift, 0))`.
    Shift(Box<Modulus>, i32),
    /// `k -> inner(symbol(k))`.
    Through(SymbolModulus, Box<Modulus>),
    Max(Vec<Modulus>),
}

impl Modulus {
    pub fn at(&self, k: u32) -> u32 {
        match self {
            Modulus::Constant => 0,
            Modulus::Identity => k,
            Modulus::Shift(inner, s) => inner.at((k as i64 + *s as i64).max(0) as u32),
            Modulus::Through(sym, inner) => inner.at(sym.at(k)),
            Modulus::Max(ms) => ms.iter().map(|m| m.at(k)).max().unwrap_or(0),
        }
    }

    fn is_constant(&self) -> bool {
        matches!(self, Modulus::Constant)
    }
}

/// Bits needed so that `n` equal error shares sum to at most one unit.
fn share_bits(n: usize) -> i32 {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as i32
    }
}

fn combine(parts: Vec<Modulus>) -> Modulus {
    let live: Vec<Modulus> = parts.into_iter().filter(|m| !m.is_constant()).collect();
    match live.len() {
        0 => Modulus::Constant,
        1 => live.into_iter().next().unwrap(),
        n => Modulus::Shift(Box::new(Modulus::Max(live)), share_bits(n)),
    }
}

fn term_modulus(t: &Term, x: &str, sig: &Signature) -> Modulus {
    match t {
        Term::Var(v) if v == x => Modulus::Identity,
        Term::Var(_) | Term::Fresh(_) | Term::Named(_) => Modulus::Constant,
        Term::App(f, args) => {
            let sym = sig
                .function(f)
                .map(|s| s.modulus)
                .unwrap_or(SymbolModulus::LIPSCHITZ_1);
            combine(
                args.iter()
                    .map(|a| match term_modulus(a, x, sig) {
                        Modulus::Constant => Modulus::Constant,
                        m => Modulus::Through(sym, Box::new(m)),
                    })
                    .collect(),
            )
        }
        // |λ|, |μ| <= 1: each slot is 1-Lipschitz
        Term::Comb(_, a, _, b) => combine(vec![term_modulus(a, x, sig), term_modulus(b, x, sig)]),
    }
}

/// Modulus of `phi` in the free variable `x`, composed from the symbol
/// moduli: `Half` gains one bit, `∸` with `x` on both sides needs one
/// extra bit on each side, quantifiers over other variables preserve it.
pub fn modulus_of(phi: &Formula, x: &str, sig: &Signature) -> Modulus {
    match phi {
        Formula::Atomic(p, args) => {
            let sym = sig
                .predicate(p)
                .map(|s| s.modulus)
                .unwrap_or(SymbolModulus::LIPSCHITZ_1);
            combine(
                args.iter()
                    .map(|a| match term_modulus(a, x, sig) {
                        Modulus::Constant => Modulus::Constant,
                        m => Modulus::Through(sym, Box::new(m)),
                    })
                    .collect(),
            )
        }
        Formula::Zero(_) | Formula::One(_) => Modulus::Constant,
        Formula::Half(a) => match modulus_of(a, x, sig) {
            Modulus::Constant => Modulus::Constant,
            m => Modulus::Shift(Box::new(m), -1),
        },
        Formula::DotMinus(a, b) => combine(vec![modulus_of(a, x, sig), modulus_of(b, x, sig)]),
        Formula::Sup(y, body) | Formula::Inf(y, body) => {
            if y == x {
                Modulus::Constant
            } else {
                modulus_of(body, x, sig)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{pow2_neg, q, Q};

    fn dx(c: u32) -> Formula {
        Formula::d(Term::var("x"), Term::c(c))
    }

    #[test]
    fn composed_moduli() {
        let sig = Signature::metric();
        assert_eq!(modulus_of(&dx(1), "x", &sig).at(3), 3);
        assert_eq!(modulus_of(&Formula::half(dx(1)), "x", &sig).at(3), 2);
        assert_eq!(modulus_of(&Formula::dm(dx(1), dx(2)), "x", &sig).at(3), 4);
        assert_eq!(modulus_of(&Formula::one(), "x", &sig).at(3), 0);
        let bound = Formula::sup("x", dx(1));
        assert_eq!(modulus_of(&bound, "x", &sig).at(5), 0);
    }

    /// Brute-force Lipschitz estimate on a 5-point subset of the line.
    #[test]
    fn dot_minus_modulus_matches_brute_force() {
        let pts = [q(0, 1), q(1, 16), q(1, 8), q(1, 2), q(1, 1)];
        let d = |a: &Q, b: &Q| if a > b { a - b } else { b - a };
        let phi = |x: &Q, c1: &Q, c2: &Q| {
            let v = d(x, c1) - d(x, c2);
            if v > Q::from_integer(0.into()) {
                v
            } else {
                Q::from_integer(0.into())
            }
        };
        let sig = Signature::metric();
        let m = modulus_of(&Formula::dm(dx(1), dx(2)), "x", &sig);
        let mut lipschitz = Q::from_integer(0.into());
        for k in 0..6u32 {
            let need = pow2_neg(m.at(k));
            for x in &pts {
                for y in &pts {
                    if x == y {
                        continue;
                    }
                    for c1 in &pts {
                        for c2 in &pts {
                            let delta = d(&phi(x, c1, c2), &phi(y, c1, c2));
                            let ratio = &delta / d(x, y);
                            if ratio > lipschitz {
                                lipschitz = ratio;
                            }
                            if d(x, y) <= need {
                                assert!(delta <= pow2_neg(k));
                            }
                        }
                    }
                }
            }
        }
        // worst case is exactly Lipschitz 2, which is what m(k) = k + 1 encodes
        assert_eq!(lipschitz, q(2, 1));
    }
}
