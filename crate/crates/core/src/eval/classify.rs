//! Arithmetical-hierarchy labels for sets of codes `{σ : σ^M ⋈ r}`.

use super::EvalError;
use crate::coding::{decode, GodelCode};
use crate::formula::{classify_prefix, PrefixClass, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relation {
    pub fn parse(text: &str) -> Option<Relation> {
        Some(match text {
            "<" | "lt" => Relation::Lt,
            "<=" | "le" => Relation::Le,
            ">" | "gt" => Relation::Gt,
            ">=" | "ge" => Relation::Ge,
            _ => return None,
        })
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

/// Label of `{(σ, r) : σ^M ⋈ r}` for `∀_{2n}` sentences `σ` in a
/// structure with a d-computable presentation.
pub fn hierarchy_label(relation: Relation, n: u32) -> String {
    match relation {
        Relation::Le => format!("Π_{n}^d"),
        Relation::Lt => format!("Σ_{}^d", n + 1),
        Relation::Ge => format!("Π_{}^d", n + 1),
        Relation::Gt => format!("Σ_{n}^d"),
    }
}

/// Whether the class sits inside `∀_{2n}`: quantifier-free sentences,
/// `∀_m` for `m <= 2n` and `∃_m` for `m < 2n`.
pub fn fits_level(class: PrefixClass, n: u32) -> bool {
    match class {
        PrefixClass::QuantifierFree => true,
        PrefixClass::ForallN(m) => m <= 2 * n,
        PrefixClass::ExistsN(m) => m < 2 * n,
    }
}

pub fn classify_prefix_label(class: PrefixClass, relation: Relation, n: u32) -> Result<String, EvalError> {
    if n == 0 || !fits_level(class, n) {
        return Err(EvalError::WrongPrefixClass {
            found: class.label(),
            level: n,
        });
    }
    Ok(hierarchy_label(relation, n))
}

/// Decodes `code`, checks that it is a `∀_{2n}` sentence, and labels it.
pub fn classify(code: &GodelCode, sig: &Signature, relation: Relation, n: u32) -> Result<String, EvalError> {
    let phi = decode(code, sig)?;
    if !phi.is_sentence() {
        return Err(EvalError::NotClosed);
    }
    let class = classify_prefix(&crate::formula::prenex(&phi))?;
    classify_prefix_label(class, relation, n)
}
