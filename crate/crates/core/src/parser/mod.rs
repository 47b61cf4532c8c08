//! Text syntax for formulas and signatures, and the matching printer.
//! The grammar is written out in `docs/grammar.md`.

mod lexer;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::formula::{
    fresh_index, ConstantSymbol, Formula, FunctionSymbol, PredicateSymbol, Preset, Signature,
    SymbolModulus, Term, BOT,
};
use crate::numeric::{GaussQ, Q};
use lexer::{lex, Spanned, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParseErrorKind {
    SyntaxError,
    UnknownSymbol,
    ArityMismatch,
    RoundedBoundViolation,
    ScalarNotGaussianRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, line: usize, col: usize, message: String) -> Self {
        ParseError {
            kind,
            line,
            col,
            message,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {:?}: {}", self.line, self.col, self.kind, self.message)
    }
}

impl std::error::Error for ParseError {}

type R<T> = Result<T, ParseError>;

struct Cursor<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, sig: &'a Signature) -> R<Self> {
        Ok(Cursor {
            toks: lex(text)?,
            pos: 0,
            sig,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at<T>(&self, at: &Spanned, kind: ParseErrorKind, msg: String) -> R<T> {
        Err(ParseError::new(kind, at.line, at.col, msg))
    }

    fn syntax<T>(&self, expected: &str) -> R<T> {
        let here = self.here();
        self.err_at(
            here,
            ParseErrorKind::SyntaxError,
            format!("expected {expected}, found {}", here.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> R<Spanned> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            self.syntax(&tok.describe())
        }
    }

    fn expect_eof(&mut self) -> R<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            Tok::DotMinus => self.syntax("end of input (chained `-.` needs parentheses)"),
            _ => self.syntax("end of input"),
        }
    }

    fn formula(&mut self) -> R<Formula> {
        let left = self.unary()?;
        if *self.peek() == Tok::DotMinus {
            self.bump();
            let right = self.unary()?;
            return Ok(Formula::dm(left, right));
        }
        Ok(left)
    }

    fn bound_variable(&mut self) -> R<String> {
        let at = self.here().clone();
        match &at.tok {
            Tok::Ident(name) if !self.sig.is_reserved(name) => {
                self.bump();
                Ok(name.clone())
            }
            Tok::Ident(name) => self.err_at(
                &at,
                ParseErrorKind::SyntaxError,
                format!("`{name}` is reserved and cannot be a variable"),
            ),
            _ => self.syntax("a variable name"),
        }
    }

    fn parenthesized_formula(&mut self) -> R<Formula> {
        self.expect(Tok::LParen)?;
        let f = self.formula()?;
        self.expect(Tok::RParen)?;
        Ok(f)
    }

    fn unary(&mut self) -> R<Formula> {
        let at = self.here().clone();
        match &at.tok {
            Tok::LParen => self.parenthesized_formula(),
            Tok::Int(n) if n == "0" => {
                self.bump();
                Ok(Formula::zero())
            }
            Tok::Int(n) if n == "1" => {
                self.bump();
                Ok(Formula::one())
            }
            Tok::Ident(word) => {
                let word = word.clone();
                match word.as_str() {
                    "sup" | "inf" => {
                        self.bump();
                        let x = self.bound_variable()?;
                        self.expect(Tok::Dot)?;
                        let body = Box::new(self.formula()?);
                        Ok(if word == "sup" {
                            Formula::Sup(x, body)
                        } else {
                            Formula::Inf(x, body)
                        })
                    }
                    "half" | "zero" | "one" if *self.peek2() == Tok::LParen => {
                        self.bump();
                        let a = Box::new(self.parenthesized_formula()?);
                        Ok(match word.as_str() {
                            "half" => Formula::Half(a),
                            "zero" => Formula::Zero(a),
                            _ => Formula::One(a),
                        })
                    }
                    _ => self.atomic(),
                }
            }
            _ => self.syntax("a formula"),
        }
    }

    fn atomic(&mut self) -> R<Formula> {
        let at = self.bump();
        let Tok::Ident(name) = &at.tok else {
            unreachable!("atomic called on an identifier");
        };
        let Some(p) = self.sig.predicate(name) else {
            return self.err_at(
                &at,
                ParseErrorKind::UnknownSymbol,
                format!("unknown predicate `{name}`"),
            );
        };
        let (pname, arity) = (p.name.clone(), p.arity);
        let args = if *self.peek() == Tok::LParen {
            self.arguments()?
        } else {
            vec![]
        };
        if args.len() != arity {
            return self.err_at(
                &at,
                ParseErrorKind::ArityMismatch,
                format!("`{pname}` expects {arity} arguments, got {}", args.len()),
            );
        }
        Ok(Formula::Atomic(pname, args))
    }

    fn arguments(&mut self) -> R<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.syntax("`,` or `)`"),
            }
        }
    }

    fn term(&mut self) -> R<Term> {
        let at = self.here().clone();
        let Tok::Ident(name) = &at.tok else {
            return self.syntax("a term");
        };
        let name = name.clone();
        let call = *self.peek2() == Tok::LParen;
        if name == "comb" && call {
            if !self.sig.combinations {
                return self.err_at(
                    &at,
                    ParseErrorKind::UnknownSymbol,
                    "rounded combinations are not terms of this signature".into(),
                );
            }
            self.bump();
            return self.combination(&at);
        }
        if let Some(i) = fresh_index(&name) {
            self.bump();
            return Ok(Term::Fresh(i));
        }
        if let Some(f) = self.sig.function(&name) {
            let (fname, arity) = (f.name.clone(), f.arity);
            self.bump();
            if !call {
                return self.syntax("`(` after a function symbol");
            }
            let args = self.arguments()?;
            if args.len() != arity {
                return self.err_at(
                    &at,
                    ParseErrorKind::ArityMismatch,
                    format!("`{fname}` expects {arity} arguments, got {}", args.len()),
                );
            }
            return Ok(Term::App(fname, args));
        }
        if self.sig.constant(&name).is_some() {
            self.bump();
            return Ok(Term::Named(name));
        }
        if call {
            return self.err_at(
                &at,
                ParseErrorKind::UnknownSymbol,
                format!("unknown function `{name}`"),
            );
        }
        if self.sig.is_reserved(&name) {
            return self.err_at(
                &at,
                ParseErrorKind::SyntaxError,
                format!("`{name}` cannot appear as a term"),
            );
        }
        self.bump();
        Ok(Term::Var(name))
    }

    fn combination(&mut self, at: &Spanned) -> R<Term> {
        self.expect(Tok::LParen)?;
        let l = self.scalar_then(Tok::Comma)?;
        let a = self.term()?;
        self.expect(Tok::Comma)?;
        let m = self.scalar_then(Tok::Comma)?;
        let b = self.term()?;
        self.expect(Tok::RParen)?;
        if !GaussQ::rounded_pair_ok(&l, &m) {
            return self.err_at(
                at,
                ParseErrorKind::RoundedBoundViolation,
                format!("|{l}| + |{m}| > 1"),
            );
        }
        Ok(Term::Comb(l, Box::new(a), m, Box::new(b)))
    }

    /// A Gaussian rational that must be followed by `follow`.
    fn scalar_then(&mut self, follow: Tok) -> R<GaussQ> {
        let at = self.here().clone();
        let bad = |c: &Self| {
            c.err_at(
                &at,
                ParseErrorKind::ScalarNotGaussianRational,
                "scalar must be a Gaussian rational `a/b+c/di`".into(),
            )
        };
        let Some(z) = self.gauss() else {
            return bad(self);
        };
        if *self.peek() != follow {
            return bad(self);
        }
        self.bump();
        Ok(z)
    }

    fn rational(&mut self) -> Option<Q> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let Tok::Int(n) = self.peek().clone() else {
            return None;
        };
        self.bump();
        let num: BigInt = n.parse().ok()?;
        let mut den = BigInt::from(1);
        if *self.peek() == Tok::Slash {
            self.bump();
            let Tok::Int(d) = self.peek().clone() else {
                return None;
            };
            self.bump();
            den = d.parse().ok()?;
            if den.is_zero() {
                return None;
            }
        }
        let x = Q::new(num, den);
        Some(if neg { -x } else { x })
    }

    fn imaginary_unit(&mut self) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == "i") {
            self.bump();
            true
        } else {
            false
        }
    }

    fn gauss(&mut self) -> Option<GaussQ> {
        let first = self.rational()?;
        if self.imaginary_unit() {
            return Some(GaussQ::new(Q::zero(), first));
        }
        let sign = match self.peek() {
            Tok::Plus => false,
            Tok::Minus => true,
            _ => return Some(GaussQ::real(first)),
        };
        self.bump();
        let im = self.rational()?;
        if !self.imaginary_unit() {
            return None;
        }
        Some(GaussQ::new(first, if sign { -im } else { im }))
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> R<Formula> {
    let mut c = Cursor::new(text, sig)?;
    let f = c.formula()?;
    c.expect_eof()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> R<Term> {
    let mut c = Cursor::new(text, sig)?;
    let t = c.term()?;
    c.expect_eof()?;
    Ok(t)
}

/// A Gaussian rational such as `3/4`, `-1/2+1/3i`, or `2i`.
pub fn parse_gauss(text: &str) -> R<GaussQ> {
    let sig = Signature::metric();
    let mut c = Cursor::new(text, &sig)?;
    let at = c.here().clone();
    match c.gauss() {
        Some(z) if *c.peek() == Tok::Eof => Ok(z),
        _ => c.err_at(
            &at,
            ParseErrorKind::ScalarNotGaussianRational,
            format!("`{}` is not a Gaussian rational", text.trim()),
        ),
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) | Term::Named(v) => out.push_str(v),
        Term::Fresh(i) => {
            out.push('c');
            out.push_str(&i.to_string());
        }
        Term::App(f, args) => {
            out.push_str(f);
            write_args(out, args);
        }
        Term::Comb(l, a, m, b) => {
            out.push_str(&format!("comb({l}, "));
            write_term(out, a);
            out.push_str(&format!(", {m}, "));
            write_term(out, b);
            out.push(')');
        }
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(out, a);
    }
    out.push(')');
}

fn is_bot(f: &Formula) -> bool {
    matches!(f, Formula::Atomic(p, args) if p == BOT && args.is_empty())
}

fn write_operand(out: &mut String, f: &Formula) {
    if matches!(f, Formula::DotMinus(..) | Formula::Sup(..) | Formula::Inf(..)) {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Atomic(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                write_args(out, args);
            }
        }
        Formula::Zero(a) if is_bot(a) => out.push('0'),
        Formula::One(a) if is_bot(a) => out.push('1'),
        Formula::Zero(a) | Formula::One(a) | Formula::Half(a) => {
            out.push_str(match f {
                Formula::Zero(_) => "zero(",
                Formula::One(_) => "one(",
                _ => "half(",
            });
            write_formula(out, a);
            out.push(')');
        }
        Formula::DotMinus(a, b) => {
            write_operand(out, a);
            out.push_str(" -. ");
            write_operand(out, b);
        }
        Formula::Sup(x, body) | Formula::Inf(x, body) => {
            out.push_str(if matches!(f, Formula::Sup(..)) { "sup " } else { "inf " });
            out.push_str(x);
            out.push_str(" . ");
            write_formula(out, body);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t);
    out
}

fn parse_modulus(words: &[&str], line: usize) -> R<SymbolModulus> {
    match words {
        [] => Ok(SymbolModulus::LIPSCHITZ_1),
        ["modulus", scale, shift] => {
            let scale = scale.parse().ok();
            let shift = shift.parse().ok();
            match (scale, shift) {
                (Some(scale), Some(shift)) => Ok(SymbolModulus { scale, shift }),
                _ => Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    line,
                    1,
                    "modulus needs an unsigned scale and a signed shift".into(),
                )),
            }
        }
        _ => Err(ParseError::new(
            ParseErrorKind::SyntaxError,
            line,
            1,
            "expected `modulus SCALE SHIFT` or end of line".into(),
        )),
    }
}

/// Signature declarations, one per line:
///
/// ```text
/// preset cstar
/// predicate near 2 modulus 1 1
/// function shift 1
/// constant u
/// combinations
/// ```
pub fn parse_signature(text: &str) -> R<Signature> {
    let mut sig = Signature {
        preset: Preset::Custom,
        predicates: vec![PredicateSymbol {
            id: 0,
            name: BOT.into(),
            arity: 0,
            modulus: SymbolModulus::LIPSCHITZ_1,
        }],
        functions: vec![],
        constants: vec![],
        combinations: false,
    };
    let mut declared = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let err = |kind, msg: String| Err(ParseError::new(kind, line, 1, msg));
        let fresh_name = |sig: &Signature, name: &str| -> R<String> {
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || sig.is_reserved(name) {
                return Err(ParseError::new(
                    ParseErrorKind::SyntaxError,
                    line,
                    1,
                    format!("`{name}` cannot be declared"),
                ));
            }
            Ok(name.to_string())
        };
        match words.as_slice() {
            ["preset", name] => {
                if declared {
                    return err(
                        ParseErrorKind::SyntaxError,
                        "`preset` must come before declarations".into(),
                    );
                }
                match Signature::by_name(name) {
                    Some(p) => sig = p,
                    None => {
                        return err(ParseErrorKind::UnknownSymbol, format!("unknown preset `{name}`"))
                    }
                }
            }
            ["predicate", name, arity, rest @ ..] | ["function", name, arity, rest @ ..] => {
                let name = fresh_name(&sig, name)?;
                let Ok(arity) = arity.parse::<usize>() else {
                    return err(ParseErrorKind::SyntaxError, "arity must be a natural".into());
                };
                let modulus = parse_modulus(rest, line)?;
                if words[0] == "predicate" {
                    let id = sig.predicates.iter().map(|p| p.id + 1).max().unwrap_or(0);
                    sig.predicates.push(PredicateSymbol {
                        id,
                        name,
                        arity,
                        modulus,
                    });
                } else {
                    if arity == 0 {
                        return err(
                            ParseErrorKind::SyntaxError,
                            "nullary functions are declared as constants".into(),
                        );
                    }
                    let id = sig.functions.iter().map(|f| f.id + 1).max().unwrap_or(0);
                    sig.functions.push(FunctionSymbol {
                        id,
                        name,
                        arity,
                        modulus,
                    });
                }
                sig.preset = Preset::Custom;
            }
            ["constant", name] => {
                let name = fresh_name(&sig, name)?;
                let id = sig.constants.iter().map(|c| c.id + 1).max().unwrap_or(0);
                sig.constants.push(ConstantSymbol { id, name });
                sig.preset = Preset::Custom;
            }
            ["combinations"] => {
                sig.combinations = true;
                sig.preset = Preset::Custom;
            }
            _ => return err(ParseErrorKind::SyntaxError, format!("cannot read `{content}`")),
        }
        declared = true;
    }
    Ok(sig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{random_formula, RandomFormulaConfig};
    use crate::numeric::q;
    use rand::SeedableRng;

    #[test]
    fn examples() {
        let sig = Signature::metric();
        let phi = parse_formula("sup x . d(x, c1)", &sig).unwrap();
        assert_eq!(phi, Formula::sup("x", Formula::d(Term::var("x"), Term::c(1))));
        let body = parse_formula("1 -. sup x . d(x,x)", &sig).unwrap();
        assert_eq!(
            body,
            Formula::dm(Formula::one(), Formula::sup("x", Formula::d(Term::var("x"), Term::var("x"))))
        );
        let consistency = parse_formula("(1 -. sup x . d(x,x)) -. half(1)", &sig).unwrap();
        assert_eq!(consistency, Formula::dm(body, Formula::pow2_neg(1)));
        let err = parse_formula("comb(3/4+0i, x, 1/2+0i, y)", &Signature::cstar());
        assert!(err.is_err());
        let err = parse_formula("d(comb(3/4+0i, x, 1/2+0i, y), x)", &Signature::cstar()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::RoundedBoundViolation);
        assert_eq!((err.line, err.col), (1, 3));
    }

    #[test]
    fn error_kinds() {
        let m = Signature::metric();
        let c = Signature::cstar();
        let kind = |t: &str, s: &Signature| parse_formula(t, s).unwrap_err().kind;
        assert_eq!(kind("d(x)", &m), ParseErrorKind::ArityMismatch);
        assert_eq!(kind("e(x, y)", &m), ParseErrorKind::UnknownSymbol);
        assert_eq!(kind("d(x, y", &m), ParseErrorKind::SyntaxError);
        assert_eq!(kind("d(x,y) -. d(x,y) -. 1", &m), ParseErrorKind::SyntaxError);
        assert_eq!(kind("d(comb(0.5, x, 0, y), x)", &c), ParseErrorKind::ScalarNotGaussianRational);
        assert_eq!(kind("d(comb(x, x, 0, y), x)", &c), ParseErrorKind::ScalarNotGaussianRational);
        assert_eq!(kind("d(comb(1/0, x, 0, y), x)", &c), ParseErrorKind::ScalarNotGaussianRational);
        assert_eq!(kind("d(foo(x), x)", &c), ParseErrorKind::UnknownSymbol);
        let e = parse_formula("sup x .\n  d(x, $)", &m).unwrap_err();
        assert_eq!((e.line, e.col), (2, 8));
    }

    #[test]
    fn gauss_literals() {
        assert_eq!(parse_gauss("3/4").unwrap(), GaussQ::real(q(3, 4)));
        assert_eq!(parse_gauss("-1/2-1/3i").unwrap(), GaussQ::new(q(-1, 2), q(-1, 3)));
        assert_eq!(parse_gauss("2i").unwrap(), GaussQ::new(q(0, 1), q(2, 1)));
        assert!(parse_gauss("0.5").is_err());
    }

    #[test]
    fn nested_dot_minus_prints_parentheses() {
        let m = Signature::metric();
        let a = Formula::d(Term::c(1), Term::c(2));
        let f = Formula::dm(Formula::dm(a.clone(), a.clone()), Formula::sup("x", a.clone()));
        let text = print_formula(&f);
        assert_eq!(text, "(d(c1, c2) -. d(c1, c2)) -. (sup x . d(c1, c2))");
        assert_eq!(parse_formula(&text, &m).unwrap(), f);
        assert_eq!(print_formula(&Formula::pow2_neg(2)), "half(half(1))");
    }

    #[test]
    fn random_round_trips() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for sig in [Signature::metric(), Signature::cstar(), Signature::tvna()] {
            for _ in 0..300 {
                let phi = random_formula(&mut rng, &sig, &RandomFormulaConfig::new(6));
                let text = print_formula(&phi);
                assert_eq!(parse_formula(&text, &sig).unwrap(), phi, "{text}");
            }
        }
    }

    #[test]
    fn signature_text() {
        let sig = parse_signature("preset metric\npredicate near 2 modulus 1 1\nconstant u # base point\n").unwrap();
        assert_eq!(sig.preset, Preset::Custom);
        assert_eq!(sig.predicate("near").unwrap().id, 2);
        let phi = parse_formula("near(u, c1) -. d(u, u)", &sig).unwrap();
        assert_eq!(phi.fresh_constants().len(), 1);
        assert!(parse_signature("predicate sup 1").is_err());
        assert_eq!(parse_signature("preset tvna").unwrap(), Signature::tvna());
    }
}
