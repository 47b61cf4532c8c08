//! Random well-formed formulas for property tests and the self-test.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Formula, Signature, Term};
use crate::numeric::{q, GaussQ};

#[derive(Clone, Debug)]
pub struct RandomFormulaConfig {
    pub max_depth: usize,
    pub max_term_depth: usize,
    /// Names used for quantified (and, if allowed, free) variables.
    pub vars: Vec<String>,
    /// Fresh constants drawn from `c1 ..= c<fresh>`; 0 disables them.
    pub fresh: u32,
    pub allow_free: bool,
    pub allow_quantifiers: bool,
}

impl RandomFormulaConfig {
    pub fn new(max_depth: usize) -> Self {
        RandomFormulaConfig {
            max_depth,
            max_term_depth: 2,
            vars: ["x", "y", "z"].iter().map(|s| s.to_string()).collect(),
            fresh: 3,
            allow_free: true,
            allow_quantifiers: true,
        }
    }

    pub fn sentences(mut self) -> Self {
        self.allow_free = false;
        self
    }

    pub fn quantifier_free(mut self) -> Self {
        self.allow_quantifiers = false;
        self
    }
}

const SMALL_DENOMS: [i64; 5] = [1, 2, 3, 4, 8];

fn small_rational<R: Rng>(rng: &mut R) -> crate::numeric::Q {
    let den = *SMALL_DENOMS.choose(rng).unwrap();
    q(rng.gen_range(-den..=den), den)
}

/// A random pair satisfying `|λ| + |μ| <= 1`, found by rejection.
pub fn random_rounded_pair<R: Rng>(rng: &mut R) -> (GaussQ, GaussQ) {
    loop {
        let l = GaussQ::new(small_rational(rng), small_rational(rng));
        let m = GaussQ::new(small_rational(rng), small_rational(rng));
        if GaussQ::rounded_pair_ok(&l, &m) {
            return (l, m);
        }
    }
}

fn random_leaf<R: Rng>(rng: &mut R, sig: &Signature, cfg: &RandomFormulaConfig, scope: &[String]) -> Term {
    let mut options: Vec<Term> = scope.iter().map(|v| Term::Var(v.clone())).collect();
    if cfg.allow_free {
        options.extend(cfg.vars.iter().map(|v| Term::Var(v.clone())));
    }
    options.extend((1..=cfg.fresh).map(Term::Fresh));
    options.extend(sig.constants.iter().map(|c| Term::Named(c.name.clone())));
    if options.is_empty() {
        // nothing nameable: fall back on c1
        return Term::Fresh(1);
    }
    options.choose(rng).unwrap().clone()
}

fn random_term<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    cfg: &RandomFormulaConfig,
    scope: &[String],
    depth: usize,
) -> Term {
    let compound = depth > 0 && (!sig.functions.is_empty() || sig.combinations);
    if !compound || rng.gen_bool(0.5) {
        return random_leaf(rng, sig, cfg, scope);
    }
    let use_comb = sig.combinations && (sig.functions.is_empty() || rng.gen_bool(0.3));
    if use_comb {
        let (l, m) = random_rounded_pair(rng);
        let a = random_term(rng, sig, cfg, scope, depth - 1);
        let b = random_term(rng, sig, cfg, scope, depth - 1);
        return Term::Comb(l, Box::new(a), m, Box::new(b));
    }
    let f = sig.functions.choose(rng).unwrap();
    let args = (0..f.arity)
        .map(|_| random_term(rng, sig, cfg, scope, depth - 1))
        .collect();
    Term::App(f.name.clone(), args)
}

fn random_atomic<R: Rng>(rng: &mut R, sig: &Signature, cfg: &RandomFormulaConfig, scope: &[String]) -> Formula {
    // the placeholder atom stays rare
    let weighted: Vec<_> = sig
        .predicates
        .iter()
        .flat_map(|p| std::iter::repeat(p).take(if p.arity == 0 { 1 } else { 4 }))
        .collect();
    let p = weighted.choose(rng).unwrap();
    let args = (0..p.arity)
        .map(|_| random_term(rng, sig, cfg, scope, cfg.max_term_depth))
        .collect();
    Formula::Atomic(p.name.clone(), args)
}

fn random_in_scope<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    cfg: &RandomFormulaConfig,
    scope: &mut Vec<String>,
    depth: usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.15) {
        return random_atomic(rng, sig, cfg, scope);
    }
    let kinds = if cfg.allow_quantifiers && !cfg.vars.is_empty() { 7 } else { 5 };
    match rng.gen_range(0..kinds) {
        0 => random_atomic(rng, sig, cfg, scope),
        1 => {
            let choice = rng.gen_range(0..3);
            let a = Box::new(random_in_scope(rng, sig, cfg, scope, depth - 1));
            match choice {
                0 => Formula::Zero(a),
                1 => Formula::One(a),
                _ => Formula::Half(a),
            }
        }
        2 => Formula::Half(Box::new(random_in_scope(rng, sig, cfg, scope, depth - 1))),
        3 | 4 => {
            let a = random_in_scope(rng, sig, cfg, scope, depth - 1);
            let b = random_in_scope(rng, sig, cfg, scope, depth - 1);
            Formula::dm(a, b)
        }
        k => {
            let x = cfg.vars.choose(rng).unwrap().clone();
            scope.push(x.clone());
            let body = random_in_scope(rng, sig, cfg, scope, depth - 1);
            scope.pop();
            if k == 5 {
                Formula::Sup(x, Box::new(body))
            } else {
                Formula::Inf(x, Box::new(body))
            }
        }
    }
}

/// A random formula of depth at most `cfg.max_depth` that passes
/// `Formula::check` against `sig`.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, cfg: &RandomFormulaConfig) -> Formula {
    let mut scope = Vec::new();
    random_in_scope(rng, sig, cfg, &mut scope, cfg.max_depth)
}

/// A random prenex sentence: up to `max_quantifiers` leading quantifiers
/// over a quantifier-free matrix of depth at most `matrix_depth`.
pub fn random_prenex_sentence<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    cfg: &RandomFormulaConfig,
    max_quantifiers: usize,
    matrix_depth: usize,
) -> Formula {
    let nq = rng.gen_range(0..=max_quantifiers.min(cfg.vars.len()));
    let mut names = cfg.vars.clone();
    names.shuffle(rng);
    names.truncate(nq);
    let inner = RandomFormulaConfig {
        max_depth: matrix_depth,
        allow_free: false,
        allow_quantifiers: false,
        ..cfg.clone()
    };
    let mut scope = names.clone();
    let mut phi = random_in_scope(rng, sig, &inner, &mut scope, matrix_depth);
    for x in names.iter().rev() {
        phi = if rng.gen_bool(0.5) {
            Formula::Sup(x.clone(), Box::new(phi))
        } else {
            Formula::Inf(x.clone(), Box::new(phi))
        };
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_formulas_are_well_formed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for sig in [Signature::metric(), Signature::cstar(), Signature::tvna()] {
            for _ in 0..200 {
                let phi = random_formula(&mut rng, &sig, &RandomFormulaConfig::new(6));
                assert!(phi.depth() <= 6);
                phi.check(&sig).unwrap();
                let s = random_formula(&mut rng, &sig, &RandomFormulaConfig::new(6).sentences());
                assert!(s.is_sentence());
                let p = random_prenex_sentence(&mut rng, &sig, &RandomFormulaConfig::new(2), 2, 2);
                assert!(p.is_sentence());
                assert!(crate::formula::classify_prefix(&p).is_ok());
            }
        }
    }
}
