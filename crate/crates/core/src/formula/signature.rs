//! Signatures: predicate, function, and constant symbols with moduli of
//! uniform continuity, plus the three built-in presets.

use serde::Serialize;

/// Per-argument modulus `k -> max(scale·k + shift, 0)`: inputs within
/// `2^-m(k)` move the symbol's value by at most `2^-k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymbolModulus {
    pub scale: u32,
    pub shift: i32,
}

impl SymbolModulus {
    pub const LIPSCHITZ_1: SymbolModulus = SymbolModulus { scale: 1, shift: 0 };

    pub fn at(&self, k: u32) -> u32 {
        let v = self.scale as i64 * k as i64 + self.shift as i64;
        v.max(0) as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateSymbol {
    pub id: u32,
    pub name: String,
    pub arity: usize,
    pub modulus: SymbolModulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionSymbol {
    pub id: u32,
    pub name: String,
    pub arity: usize,
    pub modulus: SymbolModulus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantSymbol {
    pub id: u32,
    pub name: String,
}

/// Which built-in family a signature belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Metric,
    Cstar,
    Tvna,
    Custom,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Preset> {
        match name {
            "metric" => Some(Preset::Metric),
            "cstar" => Some(Preset::Cstar),
            "tvna" => Some(Preset::Tvna),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Metric => "metric",
            Preset::Cstar => "cstar",
            Preset::Tvna => "tvna",
            Preset::Custom => "custom",
        }
    }
}

/// Name of the nullary placeholder predicate (constant value 0) that the
/// unary connectives are applied to when building constants.
pub const BOT: &str = "bot";

/// A computable continuous signature. The fresh constants `c1, c2, ...`
/// are implicit in every signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub preset: Preset,
    pub predicates: Vec<PredicateSymbol>,
    pub functions: Vec<FunctionSymbol>,
    pub constants: Vec<ConstantSymbol>,
    /// Whether rounded combinations `comb(λ, t, μ, s)` are terms.
    pub combinations: bool,
}

fn pred(id: u32, name: &str, arity: usize) -> PredicateSymbol {
    PredicateSymbol {
        id,
        name: name.into(),
        arity,
        modulus: SymbolModulus::LIPSCHITZ_1,
    }
}

fn func(id: u32, name: &str, arity: usize) -> FunctionSymbol {
    FunctionSymbol {
        id,
        name: name.into(),
        arity,
        modulus: SymbolModulus::LIPSCHITZ_1,
    }
}

impl Signature {
    /// Bounded metric spaces: only the distance `d`.
    pub fn metric() -> Signature {
        Signature {
            preset: Preset::Metric,
            predicates: vec![pred(0, BOT, 0), pred(1, "d", 2)],
            functions: vec![],
            constants: vec![],
            combinations: false,
        }
    }

    /// C*-algebras: `d(x, y) = ||x - y|| / 2`, product, adjoint, unit,
    /// rounded combinations.
    pub fn cstar() -> Signature {
        Signature {
            preset: Preset::Cstar,
            predicates: vec![pred(0, BOT, 0), pred(1, "d", 2)],
            functions: vec![func(0, "mul", 2), func(1, "adj", 1)],
            constants: vec![ConstantSymbol {
                id: 0,
                name: "one".into(),
            }],
            combinations: true,
        }
    }

    /// Tracial von Neumann algebras: as `cstar` but `d` uses the 2-norm,
    /// plus `tr_re(x) = (1 + Re τ(x))/2` and `tr_im(x) = (1 + Im τ(x))/2`.
    pub fn tvna() -> Signature {
        let mut sig = Signature::cstar();
        sig.preset = Preset::Tvna;
        sig.predicates.push(pred(2, "tr_re", 1));
        sig.predicates.push(pred(3, "tr_im", 1));
        sig
    }

    pub fn preset(p: Preset) -> Option<Signature> {
        match p {
            Preset::Metric => Some(Signature::metric()),
            Preset::Cstar => Some(Signature::cstar()),
            Preset::Tvna => Some(Signature::tvna()),
            Preset::Custom => None,
        }
    }

    pub fn by_name(name: &str) -> Option<Signature> {
        Preset::parse(name).and_then(Signature::preset)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateSymbol> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn predicate_by_id(&self, id: u32) -> Option<&PredicateSymbol> {
        self.predicates.iter().find(|p| p.id == id)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionSymbol> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_by_id(&self, id: u32) -> Option<&FunctionSymbol> {
        self.functions.iter().find(|f| f.id == id)
    }

    pub fn constant(&self, name: &str) -> Option<&ConstantSymbol> {
        self.constants.iter().find(|c| c.name == name)
    }

    pub fn constant_by_id(&self, id: u32) -> Option<&ConstantSymbol> {
        self.constants.iter().find(|c| c.id == id)
    }

    /// True when `name` is reserved by the signature (symbol or fresh
    /// constant spelling) and so cannot be a variable.
    pub fn is_reserved(&self, name: &str) -> bool {
        fresh_index(name).is_some()
            || self.predicate(name).is_some()
            || self.function(name).is_some()
            || self.constant(name).is_some()
            || matches!(name, "sup" | "inf" | "half" | "zero" | "one" | "comb")
    }
}

/// `c<i>` with `i >= 1` spells the fresh constant `c_i`.
pub fn fresh_index(name: &str) -> Option<u32> {
    let digits = name.strip_prefix('c')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&i| i >= 1)
}
