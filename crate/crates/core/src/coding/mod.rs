//! Gödel numbering of restricted formulas and pre-conditions.
//!
//! A code is the natural with binary expansion `1 ‖ payload`. Payloads are
//! self-delimiting, so the coding is injective and membership in its image
//! is decided by parsing. Layout (γ = Elias gamma of `n + 1`):
//!
//! ```text
//! formula := tag:3 body
//!   000 atomic   γ(pred id) γ(argc) term*
//!   001 zero     formula
//!   010 one      formula
//!   011 half     formula
//!   100 dotminus formula formula
//!   101 sup      name formula
//!   110 inf      name formula
//! term := tag:3 body
//!   000 var      name
//!   001 fresh    γ(i - 1)             c_i, i >= 1
//!   010 named    γ(constant id)
//!   011 app      γ(fn id) γ(argc) term*
//!   100 comb     gauss gauss term term
//! name     := γ(len) byte*             identifier, not reserved
//! gauss    := rational rational        real part, imaginary part
//! rational := sign:1 nat(|num|) nat(den - 1)   reduced, den >= 1
//! nat      := γ(bit length) bits       top bit set
//! ```
//!
//! A pre-condition `(k_1, r_1) ... (k_n, r_n)` is `γ(n)` followed by
//! `nat(k_i) nat(m_i - 1) γ(e_i)` for `r_i = m_i / 2^e_i` in lowest terms.

mod bits;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub use bits::{BitReader, BitWriter};

use crate::formula::{classify_prefix, Formula, PrefixClass, Signature, Term};
use crate::numeric::{dyadic_exponent, GaussQ, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("symbol `{0}` is not registered in the signature")]
    UnregisteredSymbol(String),
    #[error("`{0}` cannot be coded as a variable name")]
    BadName(String),
    #[error("not a code")]
    NotACode,
    #[error("bad pre-condition item: {0}")]
    BadItem(String),
}

/// Gödel number of a formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GodelCode(pub BigUint);

impl std::fmt::Display for GodelCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for GodelCode {
    type Err = CodingError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse().map(GodelCode).map_err(|_| CodingError::NotACode)
    }
}

/// Code of a finite tuple of (sentence code, positive dyadic) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreConditionCode(pub BigUint);

impl std::fmt::Display for PreConditionCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

const F_ATOMIC: u64 = 0b000;
const F_ZERO: u64 = 0b001;
const F_ONE: u64 = 0b010;
const F_HALF: u64 = 0b011;
const F_DOTMINUS: u64 = 0b100;
const F_SUP: u64 = 0b101;
const F_INF: u64 = 0b110;

const T_VAR: u64 = 0b000;
const T_FRESH: u64 = 0b001;
const T_NAMED: u64 = 0b010;
const T_APP: u64 = 0b011;
const T_COMB: u64 = 0b100;

fn valid_identifier(name: &str, sig: &Signature) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    (first.is_ascii_alphabetic() || first == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !sig.is_reserved(name)
}

fn write_name(w: &mut BitWriter, name: &str, sig: &Signature) -> Result<(), CodingError> {
    if !valid_identifier(name, sig) {
        return Err(CodingError::BadName(name.to_string()));
    }
    w.bytes(name.as_bytes());
    Ok(())
}

fn write_rational(w: &mut BitWriter, x: &Q) {
    w.push(x.is_negative());
    w.natural(&x.numer().abs().to_biguint().unwrap());
    w.natural(&(x.denom().to_biguint().unwrap() - BigUint::one()));
}

fn write_gauss(w: &mut BitWriter, z: &GaussQ) {
    write_rational(w, &z.re);
    write_rational(w, &z.im);
}

fn write_term(w: &mut BitWriter, t: &Term, sig: &Signature) -> Result<(), CodingError> {
    match t {
        Term::Var(v) => {
            w.push_bits(T_VAR, 3);
            write_name(w, v, sig)
        }
        Term::Fresh(i) => {
            w.push_bits(T_FRESH, 3);
            w.gamma(*i as u64 - 1);
            Ok(())
        }
        Term::Named(n) => {
            let c = sig
                .constant(n)
                .ok_or_else(|| CodingError::UnregisteredSymbol(n.clone()))?;
            w.push_bits(T_NAMED, 3);
            w.gamma(c.id as u64);
            Ok(())
        }
        Term::App(f, args) => {
            let sym = sig
                .function(f)
                .ok_or_else(|| CodingError::UnregisteredSymbol(f.clone()))?;
            w.push_bits(T_APP, 3);
            w.gamma(sym.id as u64);
            w.gamma(args.len() as u64);
            args.iter().try_for_each(|a| write_term(w, a, sig))
        }
        Term::Comb(l, a, m, b) => {
            if !sig.combinations {
                return Err(CodingError::UnregisteredSymbol("comb".into()));
            }
            w.push_bits(T_COMB, 3);
            write_gauss(w, l);
            write_gauss(w, m);
            write_term(w, a, sig)?;
            write_term(w, b, sig)
        }
    }
}

fn write_formula(w: &mut BitWriter, phi: &Formula, sig: &Signature) -> Result<(), CodingError> {
    match phi {
        Formula::Atomic(p, args) => {
            let sym = sig
                .predicate(p)
                .ok_or_else(|| CodingError::UnregisteredSymbol(p.clone()))?;
            w.push_bits(F_ATOMIC, 3);
            w.gamma(sym.id as u64);
            w.gamma(args.len() as u64);
            args.iter().try_for_each(|a| write_term(w, a, sig))
        }
        Formula::Zero(a) => {
            w.push_bits(F_ZERO, 3);
            write_formula(w, a, sig)
        }
        Formula::One(a) => {
            w.push_bits(F_ONE, 3);
            write_formula(w, a, sig)
        }
        Formula::Half(a) => {
            w.push_bits(F_HALF, 3);
            write_formula(w, a, sig)
        }
        Formula::DotMinus(a, b) => {
            w.push_bits(F_DOTMINUS, 3);
            write_formula(w, a, sig)?;
            write_formula(w, b, sig)
        }
        Formula::Sup(x, a) => {
            w.push_bits(F_SUP, 3);
            write_name(w, x, sig)?;
            write_formula(w, a, sig)
        }
        Formula::Inf(x, a) => {
            w.push_bits(F_INF, 3);
            write_name(w, x, sig)?;
            write_formula(w, a, sig)
        }
    }
}

type R<T> = Result<T, CodingError>;

fn malformed<T>(_: bits::Malformed) -> R<T> {
    Err(CodingError::NotACode)
}

fn read_name(r: &mut BitReader, sig: &Signature) -> R<String> {
    let bytes = r.bytes().or_else(malformed)?;
    let name = String::from_utf8(bytes).map_err(|_| CodingError::NotACode)?;
    if !valid_identifier(&name, sig) {
        return Err(CodingError::NotACode);
    }
    Ok(name)
}

fn read_rational(r: &mut BitReader) -> R<Q> {
    let neg = r.bit().or_else(malformed)?;
    let num = r.natural().or_else(malformed)?;
    let den = BigInt::from(r.natural().or_else(malformed)? + BigUint::one());
    let num = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, num);
    if neg && num.is_zero() {
        return Err(CodingError::NotACode);
    }
    // only lowest terms are in the image
    if !num.gcd(&den).is_one() {
        return Err(CodingError::NotACode);
    }
    Ok(Q::new_raw(num, den))
}

fn read_gauss(r: &mut BitReader) -> R<GaussQ> {
    Ok(GaussQ::new(read_rational(r)?, read_rational(r)?))
}

const MAX_DEPTH: usize = 4096;

fn read_term(r: &mut BitReader, sig: &Signature, depth: usize) -> R<Term> {
    if depth > MAX_DEPTH {
        return Err(CodingError::NotACode);
    }
    let tag = r.bits(3).or_else(malformed)?;
    match tag {
        T_VAR => Ok(Term::Var(read_name(r, sig)?)),
        T_FRESH => {
            let i = r.gamma().or_else(malformed)?;
            let i = u32::try_from(i + 1).map_err(|_| CodingError::NotACode)?;
            Ok(Term::Fresh(i))
        }
        T_NAMED => {
            let id = r.gamma().or_else(malformed)?;
            let c = u32::try_from(id)
                .ok()
                .and_then(|id| sig.constant_by_id(id))
                .ok_or(CodingError::NotACode)?;
            Ok(Term::Named(c.name.clone()))
        }
        T_APP => {
            let id = r.gamma().or_else(malformed)?;
            let argc = r.gamma().or_else(malformed)?;
            let f = u32::try_from(id)
                .ok()
                .and_then(|id| sig.function_by_id(id))
                .ok_or(CodingError::NotACode)?;
            if f.arity as u64 != argc {
                return Err(CodingError::NotACode);
            }
            let name = f.name.clone();
            let args = (0..argc)
                .map(|_| read_term(r, sig, depth + 1))
                .collect::<R<Vec<_>>>()?;
            Ok(Term::App(name, args))
        }
        T_COMB => {
            if !sig.combinations {
                return Err(CodingError::NotACode);
            }
            let l = read_gauss(r)?;
            let m = read_gauss(r)?;
            if !GaussQ::rounded_pair_ok(&l, &m) {
                return Err(CodingError::NotACode);
            }
            let a = read_term(r, sig, depth + 1)?;
            let b = read_term(r, sig, depth + 1)?;
            Ok(Term::Comb(l, Box::new(a), m, Box::new(b)))
        }
        _ => Err(CodingError::NotACode),
    }
}

fn read_formula(r: &mut BitReader, sig: &Signature, depth: usize) -> R<Formula> {
    if depth > MAX_DEPTH {
        return Err(CodingError::NotACode);
    }
    let tag = r.bits(3).or_else(malformed)?;
    let sub = |r: &mut BitReader| read_formula(r, sig, depth + 1).map(Box::new);
    match tag {
        F_ATOMIC => {
            let id = r.gamma().or_else(malformed)?;
            let argc = r.gamma().or_else(malformed)?;
            let p = u32::try_from(id)
                .ok()
                .and_then(|id| sig.predicate_by_id(id))
                .ok_or(CodingError::NotACode)?;
            if p.arity as u64 != argc {
                return Err(CodingError::NotACode);
            }
            let name = p.name.clone();
            let args = (0..argc)
                .map(|_| read_term(r, sig, depth + 1))
                .collect::<R<Vec<_>>>()?;
            Ok(Formula::Atomic(name, args))
        }
        F_ZERO => Ok(Formula::Zero(sub(r)?)),
        F_ONE => Ok(Formula::One(sub(r)?)),
        F_HALF => Ok(Formula::Half(sub(r)?)),
        F_DOTMINUS => {
            let a = sub(r)?;
            let b = sub(r)?;
            Ok(Formula::DotMinus(a, b))
        }
        F_SUP => {
            let x = read_name(r, sig)?;
            Ok(Formula::Sup(x, sub(r)?))
        }
        F_INF => {
            let x = read_name(r, sig)?;
            Ok(Formula::Inf(x, sub(r)?))
        }
        _ => Err(CodingError::NotACode),
    }
}

fn payload_bits(phi: &Formula, sig: &Signature) -> R<BitWriter> {
    let mut w = BitWriter::new();
    write_formula(&mut w, phi, sig)?;
    Ok(w)
}

/// Gödel number of `phi` over `sig`.
pub fn encode(phi: &Formula, sig: &Signature) -> R<GodelCode> {
    Ok(GodelCode(payload_bits(phi, sig)?.finish()))
}

/// The formula coded by `code`, or `NotACode`.
pub fn decode(code: &GodelCode, sig: &Signature) -> R<Formula> {
    let mut r = BitReader::from_code(&code.0).ok_or(CodingError::NotACode)?;
    let phi = read_formula(&mut r, sig, 0)?;
    if !r.at_end() {
        return Err(CodingError::NotACode);
    }
    Ok(phi)
}

/// Payload of a code (the bits after the marker) and its bit length.
fn split_payload(code: &BigUint) -> (BigUint, u64) {
    let len = code.bits() - 1;
    let payload = code - (BigUint::one() << len as usize);
    (payload, len)
}

/// `⌜φ_p ∸ φ_q⌝` assembled arithmetically from the two payloads.
fn dot_minus_code(p: &BigUint, q: &BigUint) -> BigUint {
    let (pp, lp) = split_payload(p);
    let (qp, lq) = split_payload(q);
    let head = (BigUint::one() << 3usize) | BigUint::from(F_DOTMINUS);
    let mut v = head << lp as usize;
    v |= pp;
    v <<= lq as usize;
    v | qp
}

/// `f(p, n) = ⌜φ_p ∸ 2^-n⌝` with `2^-n` spelled `Half^n(One(bot))`.
pub fn f(p: &GodelCode, n: u32, sig: &Signature) -> R<GodelCode> {
    decode(p, sig)?;
    let constant = encode(&Formula::pow2_neg(n), sig)?;
    Ok(GodelCode(dot_minus_code(&p.0, &constant.0)))
}

/// `g(p, q) = ⌜φ_p ∸ φ_q⌝`.
pub fn g(p: &GodelCode, q: &GodelCode, sig: &Signature) -> R<GodelCode> {
    decode(p, sig)?;
    decode(q, sig)?;
    Ok(GodelCode(dot_minus_code(&p.0, &q.0)))
}

/// Decidable predicates on naturals; non-codes get all-false.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeFlags {
    pub is_formula: bool,
    pub is_sentence: bool,
    pub is_qf: bool,
    /// No fresh constant `c_i` occurs (a formula of `L`, not only `L(C)`).
    pub is_in_base_l: bool,
    /// Prefix class when the coded formula is prenex.
    pub prefix_class: Option<PrefixClass>,
}

pub fn code_predicates(code: &GodelCode, sig: &Signature) -> CodeFlags {
    match decode(code, sig) {
        Err(_) => CodeFlags {
            is_formula: false,
            is_sentence: false,
            is_qf: false,
            is_in_base_l: false,
            prefix_class: None,
        },
        Ok(phi) => CodeFlags {
            is_formula: true,
            is_sentence: phi.is_sentence(),
            is_qf: phi.is_quantifier_free(),
            is_in_base_l: phi.fresh_constants().is_empty(),
            prefix_class: classify_prefix(&phi).ok(),
        },
    }
}

fn check_item(k: &GodelCode, r: &Q, sig: &Signature) -> R<Formula> {
    if !r.is_positive() || dyadic_exponent(r).is_none() {
        return Err(CodingError::BadItem(format!("bound {r} is not a positive dyadic")));
    }
    let phi = decode(k, sig).map_err(|_| CodingError::BadItem(format!("{k} is not a code")))?;
    if !phi.is_quantifier_free() || !phi.is_sentence() {
        return Err(CodingError::BadItem(format!(
            "{k} is not a quantifier-free sentence"
        )));
    }
    Ok(phi)
}

/// Codes the tuple in the given order (order-sensitive).
pub fn encode_precondition(items: &[(GodelCode, Q)], sig: &Signature) -> R<PreConditionCode> {
    let mut w = BitWriter::new();
    w.gamma(items.len() as u64);
    for (k, r) in items {
        check_item(k, r, sig)?;
        let e = dyadic_exponent(r).unwrap();
        w.natural(&k.0);
        w.natural(&(r.numer().to_biguint().unwrap() - BigUint::one()));
        w.gamma(e as u64);
    }
    Ok(PreConditionCode(w.finish()))
}

/// Conditions are sets: sort by (code, bound) and drop repeats, then code the tuple.
pub fn encode_precondition_set(items: &[(GodelCode, Q)], sig: &Signature) -> R<PreConditionCode> {
    let mut v = items.to_vec();
    v.sort();
    v.dedup();
    encode_precondition(&v, sig)
}

pub fn decode_precondition(code: &PreConditionCode, sig: &Signature) -> R<Vec<(GodelCode, Q)>> {
    let mut r = BitReader::from_code(&code.0).ok_or(CodingError::NotACode)?;
    let n = r.gamma().or_else(malformed)?;
    let mut items = Vec::new();
    for _ in 0..n {
        let k = GodelCode(r.natural().or_else(malformed)?);
        let m = r.natural().or_else(malformed)? + BigUint::one();
        let e = r.gamma().or_else(malformed)?;
        let e = u32::try_from(e).map_err(|_| CodingError::NotACode)?;
        // lowest terms: odd numerator unless the bound is an integer
        if e > 0 && !m.bit(0) {
            return Err(CodingError::NotACode);
        }
        let rr = Q::new(BigInt::from(m), crate::numeric::pow2(e));
        check_item(&k, &rr, sig)?;
        items.push((k, rr));
    }
    if !r.at_end() {
        return Err(CodingError::NotACode);
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;
    use rand::{Rng, SeedableRng};

    fn sig() -> Signature {
        Signature::metric()
    }

    fn d(a: Term, b: Term) -> Formula {
        Formula::d(a, b)
    }

    #[test]
    fn round_trips() {
        let s = sig();
        let phi = Formula::sup("x", d(Term::var("x"), Term::c(1)));
        assert_eq!(decode(&encode(&phi, &s).unwrap(), &s).unwrap(), phi);
        assert_eq!(decode(&encode(&Formula::one(), &s).unwrap(), &s).unwrap(), Formula::one());
        let a = encode(&d(Term::c(1), Term::c(1)), &s).unwrap();
        let b = encode(&d(Term::c(1), Term::c(2)), &s).unwrap();
        assert_ne!(a, b);
        assert_eq!(encode(&decode(&a, &s).unwrap(), &s).unwrap(), a);
    }

    #[test]
    fn zero_is_not_a_code() {
        assert_eq!(decode(&GodelCode(BigUint::zero()), &sig()), Err(CodingError::NotACode));
    }

    #[test]
    fn decode_is_total_on_random_naturals() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let s = Signature::cstar();
        for _ in 0..1000 {
            let bytes: Vec<u8> = (0..rng.gen_range(1..24)).map(|_| rng.gen()).collect();
            let n = GodelCode(BigUint::from_bytes_be(&bytes));
            if let Ok(phi) = decode(&n, &s) {
                assert_eq!(encode(&phi, &s).unwrap(), n);
            }
        }
    }

    #[test]
    fn random_formulas_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for s in [Signature::metric(), Signature::cstar(), Signature::tvna()] {
            for _ in 0..100 {
                let phi = crate::formula::random_formula(
                    &mut rng,
                    &s,
                    &crate::formula::RandomFormulaConfig::new(6),
                );
                let c = encode(&phi, &s).unwrap();
                assert_eq!(decode(&c, &s).unwrap(), phi);
                let flags = code_predicates(&c, &s);
                assert_eq!(flags.prefix_class, classify_prefix(&phi).ok());
            }
        }
    }

    #[test]
    fn unregistered_symbols_are_rejected() {
        let phi = Formula::atomic("tr_re", vec![Term::c(1)]);
        assert_eq!(
            encode(&phi, &sig()),
            Err(CodingError::UnregisteredSymbol("tr_re".into()))
        );
    }

    #[test]
    fn coding_lemma_functions() {
        let s = sig();
        let phi = d(Term::c(1), Term::c(2));
        let p = encode(&phi, &s).unwrap();
        let f0 = decode(&f(&p, 0, &s).unwrap(), &s).unwrap();
        assert_eq!(f0, Formula::dm(phi.clone(), Formula::one()));
        let f2 = decode(&f(&p, 2, &s).unwrap(), &s).unwrap();
        assert_eq!(
            f2,
            Formula::dm(phi.clone(), Formula::half(Formula::half(Formula::one())))
        );
        assert_ne!(f(&p, 3, &s).unwrap(), p);
        let gpp = decode(&g(&p, &p, &s).unwrap(), &s).unwrap();
        assert_eq!(gpp, Formula::dm(phi.clone(), phi.clone()));
        let psi = Formula::sup("x", d(Term::var("x"), Term::c(1)));
        let qc = encode(&psi, &s).unwrap();
        assert_eq!(
            decode(&g(&p, &qc, &s).unwrap(), &s).unwrap(),
            Formula::dm(phi, psi)
        );
        assert_ne!(g(&p, &qc, &s).unwrap(), g(&qc, &p, &s).unwrap());
        assert_eq!(f(&GodelCode(BigUint::zero()), 1, &s), Err(CodingError::NotACode));
    }

    #[test]
    fn predicates() {
        let s = sig();
        let flags = code_predicates(&encode(&d(Term::c(1), Term::c(2)), &s).unwrap(), &s);
        assert!(flags.is_formula && flags.is_sentence && flags.is_qf && !flags.is_in_base_l);
        let open = code_predicates(&encode(&d(Term::var("x"), Term::var("x")), &s).unwrap(), &s);
        assert!(open.is_formula && !open.is_sentence && open.is_qf);
        let ae = Formula::sup("x", Formula::inf("y", d(Term::var("x"), Term::var("y"))));
        let flags = code_predicates(&encode(&ae, &s).unwrap(), &s);
        assert_eq!(flags.prefix_class, Some(PrefixClass::ForallN(2)));
        assert!(flags.is_in_base_l);
        let none = code_predicates(&GodelCode(BigUint::from(5u8)), &s);
        assert!(!none.is_formula && !none.is_sentence);
    }

    #[test]
    fn preconditions() {
        let s = sig();
        let empty = encode_precondition(&[], &s).unwrap();
        assert!(decode_precondition(&empty, &s).unwrap().is_empty());
        let k = encode(&d(Term::c(1), Term::c(2)), &s).unwrap();
        let one = vec![(k.clone(), q(1, 2))];
        let c = encode_precondition(&one, &s).unwrap();
        assert_eq!(decode_precondition(&c, &s).unwrap(), one);
        let k2 = encode(&d(Term::c(2), Term::c(3)), &s).unwrap();
        let ab = encode_precondition(&[(k.clone(), q(1, 2)), (k2.clone(), q(3, 4))], &s).unwrap();
        let ba = encode_precondition(&[(k2.clone(), q(3, 4)), (k.clone(), q(1, 2))], &s).unwrap();
        assert_ne!(ab, ba);
        let sab = encode_precondition_set(&[(k.clone(), q(1, 2)), (k2.clone(), q(3, 4))], &s).unwrap();
        let sba = encode_precondition_set(
            &[(k2.clone(), q(3, 4)), (k.clone(), q(1, 2)), (k2.clone(), q(3, 4))],
            &s,
        )
        .unwrap();
        assert_eq!(sab, sba);
        assert_eq!(decode_precondition(&sab, &s).unwrap().len(), 2);
        let open = encode(&d(Term::var("x"), Term::c(1)), &s).unwrap();
        assert!(matches!(
            encode_precondition(&[(open, q(1, 2))], &s),
            Err(CodingError::BadItem(_))
        ));
        assert!(matches!(
            encode_precondition(&[(k.clone(), q(1, 3))], &s),
            Err(CodingError::BadItem(_))
        ));
        assert!(matches!(
            encode_precondition(&[(k, q(0, 1))], &s),
            Err(CodingError::BadItem(_))
        ));
    }
}
