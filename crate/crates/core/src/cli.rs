//! Command-line front end. Every record on stdout is one JSON object with
//! a `schema` field; timings and diagnostics go to stderr.

use std::fmt::Debug;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::coding::{self, code_predicates, GodelCode};
use crate::eval::{self, classify, classify_prefix_label, EvalBudget, PresentationStructure, Relation};
use crate::forcing::{
    compile, exists_strategy_universal, fp_estimate, forces_sup_leq, play_game, transcript_from_jsonl, Bound,
    Condition, ConsistencyOracle, ForcingAnswer, MetricInstance, PassThrough, RandomForall, Scripted, Strategy,
};
use crate::formula::{PrefixClass, Signature};
use crate::group::{lambda_norm_lower, moments, parse_group_config, GroupAlgebraElement, GroupSpec};
use crate::matrix::{relative_gap, GaussMatrix, OPNORM_BITS};
use crate::numeric::{fmt_exact, parse_exact, to_f64, Interval, Q};
use crate::parser::{parse_formula, print_formula};
use crate::presentation::{
    C2wPresentation, CstarLambdaPresentation, GroupVnaPresentation, Presentation, RPresentation,
};
use crate::selftest;

/// Version of every JSON record printed by the binary.
pub const OUTPUT_SCHEMA: u32 = 1;

#[derive(Debug)]
pub struct CliError {
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &str, message: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "schema": OUTPUT_SCHEMA, "error": self.kind, "message": self.message })
    }
}

/// The kind is the error's variant name.
fn from_err<E: Debug + std::fmt::Display>(e: E) -> CliError {
    let debug = format!("{e:?}");
    let kind = debug
        .split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("Error");
    CliError::new(kind, e.to_string())
}

type R<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "contlogic", version, about = "Continuous logic workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gödel codes of formulas.
    Code(CodeArgs),
    /// Parse a formula and print it back.
    Parse(ParseArgs),
    /// Norm bounds for matrices and group algebra elements.
    Norm(NormArgs),
    /// Evaluate a sentence over a presentation.
    Eval(EvalArgs),
    /// Arithmetic hierarchy label of a value set.
    Classify(ClassifyArgs),
    /// Forcing games and forcing checks over bounded metric spaces.
    Force(ForceArgs),
    /// Run the built-in checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct CodeArgs {
    #[command(subcommand)]
    pub op: CodeOp,
    #[arg(long, global = true, default_value = "metric")]
    pub signature: String,
}

#[derive(Subcommand, Debug)]
pub enum CodeOp {
    Encode {
        #[arg(long)]
        formula: String,
    },
    Decode {
        #[arg(long)]
        code: String,
    },
    /// Code of `φ_p -. 2^-n`.
    F {
        #[arg(long)]
        code: String,
        #[arg(long)]
        n: u32,
    },
    /// Code of `φ_p -. φ_q`.
    G {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Decidable predicates of a natural.
    Flags {
        #[arg(long)]
        code: String,
    },
}

#[derive(Args, Debug)]
pub struct ParseArgs {
    #[arg(long)]
    pub formula: String,
    #[arg(long, default_value = "metric")]
    pub signature: String,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    /// Matrix text, rows split by `;`, entries by `,`.
    #[arg(long, conflicts_with_all = ["group", "element"])]
    pub matrix: Option<String>,
    /// Group config file.
    #[arg(long, requires = "element")]
    pub group: Option<PathBuf>,
    #[arg(long)]
    pub element: Option<String>,
    /// Moment order `n` for the lower bound `τ((a*a)^n)^(1/2n)`.
    #[arg(long)]
    pub lambda_lower: Option<usize>,
    #[arg(long)]
    pub l1: bool,
    #[arg(long)]
    pub two_norm: bool,
    /// Reduced C*-norm report, searched up to `--budget`.
    #[arg(long)]
    pub cstar: bool,
    #[arg(long, default_value_t = 16)]
    pub budget: usize,
    /// Squarings for the matrix upper bound.
    #[arg(long, default_value_t = 8)]
    pub opnorm_m: u32,
    #[arg(long, default_value_t = 32)]
    pub rayleigh: usize,
    #[arg(long, default_value_t = 20)]
    pub precision_k: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PresentationName {
    #[value(name = "R")]
    R,
    #[value(name = "L")]
    L,
    #[value(name = "cstar")]
    Cstar,
    #[value(name = "C2w")]
    C2w,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub presentation: PresentationName,
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Sentence text, or a file holding it.
    #[arg(long, visible_alias = "formula")]
    pub sentence: String,
    /// Rational points searched per quantifier.
    #[arg(long, default_value_t = 16)]
    pub budget_n: u64,
    #[arg(long, default_value_t = 10)]
    pub precision_k: u32,
    /// Budget handed to one-sided norm oracles.
    #[arg(long, default_value_t = 8)]
    pub norm_budget: usize,
    /// `cN=INDEX`: bind fresh constant `cN` to a rational point.
    #[arg(long = "bind")]
    pub binds: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, conflicts_with = "prefix")]
    pub code: Option<String>,
    /// `qf`, `forallM` or `existsM`.
    #[arg(long)]
    pub prefix: Option<String>,
    /// One of `lt`, `le`, `gt`, `ge`.
    #[arg(long)]
    pub relation: String,
    /// Level; defaults to the least level the prefix fits.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value = "metric")]
    pub signature: String,
}

#[derive(Args, Debug)]
pub struct ForceArgs {
    #[command(subcommand)]
    pub op: ForceOp,
    #[arg(long, global = true, default_value = "metric")]
    pub instance: String,
}

#[derive(Subcommand, Debug)]
pub enum ForceOp {
    /// Play a game and compile the final condition.
    Game {
        /// `pass`, `random:SEED` or a script file with one turn per line.
        #[arg(long, default_value = "random:0")]
        strategy_forall: String,
        /// `universal` or `pass`.
        #[arg(long, default_value = "universal")]
        strategy_exists: String,
        #[arg(long, default_value_t = 8)]
        rounds: usize,
        /// Write the transcript here as JSON lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether a condition forces `sup_x ψ <= r`.
    Check {
        #[arg(long, default_value = "")]
        condition: String,
        #[arg(long)]
        psi: String,
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 10)]
        budget: u32,
    },
    /// Certified bounds on the forced value of a prenex sentence.
    Fp {
        #[arg(long, default_value = "")]
        condition: String,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        budget: u32,
    },
    /// Whether a set of bounds is a condition, with a model if so.
    Condition {
        #[arg(long)]
        condition: String,
    },
    /// Replay a transcript, check it and recompile.
    Replay {
        #[arg(long)]
        transcript: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run one criterion only.
    #[arg(long)]
    pub criterion: Option<u32>,
}

fn record(kind: &str, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("record body is an object");
    obj.insert("schema".into(), json!(OUTPUT_SCHEMA));
    obj.insert("kind".into(), json!(kind));
    body
}

fn interval_json(i: &Interval) -> Value {
    json!({ "lo": fmt_exact(&i.lo), "hi": fmt_exact(&i.hi), "approx": [to_f64(&i.lo), to_f64(&i.hi)] })
}

fn signature(name: &str) -> R<Signature> {
    Signature::by_name(name).ok_or_else(|| CliError::new("UnknownSignature", format!("no signature `{name}`")))
}

fn code_arg(text: &str) -> R<GodelCode> {
    text.trim()
        .parse::<BigUint>()
        .map(GodelCode)
        .map_err(|_| CliError::new("BadCode", format!("`{text}` is not a natural")))
}

fn exact_arg(text: &str) -> R<Q> {
    parse_exact(text).ok_or_else(|| CliError::new("BadNumber", format!("`{text}` is not an exact rational")))
}

fn read_file(path: &Path) -> R<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))
}

fn group_spec(path: Option<&PathBuf>) -> R<GroupSpec> {
    let path = path.ok_or_else(|| CliError::new("MissingGroup", "--group is required"))?;
    parse_group_config(&read_file(path)?).map_err(from_err)
}

/// Bounds `φ < r` separated by `;` or newlines.
pub fn parse_condition(text: &str) -> R<Condition> {
    let sig = Signature::metric();
    let mut bounds = Vec::new();
    for part in text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
        let (phi, r) = part
            .rsplit_once('<')
            .ok_or_else(|| CliError::new("BadBound", format!("`{part}` is not of the form `φ < r`")))?;
        let phi = parse_formula(phi, &sig).map_err(from_err)?;
        bounds.push(Bound::new(phi, exact_arg(r.trim())?).map_err(from_err)?);
    }
    Ok(Condition::from_bounds(bounds))
}

pub fn run(cli: Cli) -> R<Vec<Value>> {
    match cli.command {
        Command::Code(a) => run_code(a).map(|v| vec![v]),
        Command::Parse(a) => run_parse(a).map(|v| vec![v]),
        Command::Norm(a) => run_norm(a).map(|v| vec![v]),
        Command::Eval(a) => run_eval(a).map(|v| vec![v]),
        Command::Classify(a) => run_classify(a).map(|v| vec![v]),
        Command::Force(a) => run_force(a).map(|v| vec![v]),
        Command::Selftest(a) => Ok(run_selftest(a)),
    }
}

fn formula_record(kind: &str, code: &GodelCode, sig: &Signature) -> R<Value> {
    let phi = coding::decode(code, sig).map_err(from_err)?;
    Ok(record(kind, json!({ "code": code.to_string(), "formula": print_formula(&phi) })))
}

fn run_code(a: CodeArgs) -> R<Value> {
    let sig = signature(&a.signature)?;
    match a.op {
        CodeOp::Encode { formula } => {
            let phi = parse_formula(&formula, &sig).map_err(from_err)?;
            let code = coding::encode(&phi, &sig).map_err(from_err)?;
            formula_record("encode", &code, &sig)
        }
        CodeOp::Decode { code } => formula_record("decode", &code_arg(&code)?, &sig),
        CodeOp::F { code, n } => {
            let c = coding::f(&code_arg(&code)?, n, &sig).map_err(from_err)?;
            formula_record("f", &c, &sig)
        }
        CodeOp::G { p, q } => {
            let c = coding::g(&code_arg(&p)?, &code_arg(&q)?, &sig).map_err(from_err)?;
            formula_record("g", &c, &sig)
        }
        CodeOp::Flags { code } => {
            let fl = code_predicates(&code_arg(&code)?, &sig);
            Ok(record(
                "flags",
                json!({
                    "code": code.trim(),
                    "is_formula": fl.is_formula,
                    "is_sentence": fl.is_sentence,
                    "is_qf": fl.is_qf,
                    "is_in_base_l": fl.is_in_base_l,
                    "prefix_class": fl.prefix_class.map(|c| c.label()),
                }),
            ))
        }
    }
}

fn run_parse(a: ParseArgs) -> R<Value> {
    let sig = signature(&a.signature)?;
    let phi = parse_formula(&a.formula, &sig).map_err(from_err)?;
    let code = coding::encode(&phi, &sig).map_err(from_err)?;
    Ok(record(
        "parse",
        json!({
            "formula": print_formula(&phi),
            "code": code.to_string(),
            "sentence": phi.is_sentence(),
            "quantifier_free": phi.is_quantifier_free(),
        }),
    ))
}

fn run_norm(a: NormArgs) -> R<Value> {
    if let Some(text) = &a.matrix {
        let m = GaussMatrix::parse(text).map_err(from_err)?;
        let upper = m.opnorm_upper_at(a.opnorm_m, OPNORM_BITS);
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let cands = m.rayleigh_candidates(&mut rng, a.rayleigh, 30, 24);
        let lower = m.best_lower(&cands, a.precision_k).unwrap_or_default();
        return Ok(record(
            "norm-matrix",
            json!({
                "size": m.size(),
                "opnorm_upper": fmt_exact(&upper),
                "squarings": a.opnorm_m,
                "rayleigh_lower": fmt_exact(&lower),
                "relative_gap": fmt_exact(&relative_gap(&lower, &upper)),
                "two_norm": interval_json(&m.two_norm(a.precision_k)),
                "approx": [to_f64(&lower), to_f64(&upper)],
            }),
        ));
    }
    let spec = Arc::new(group_spec(a.group.as_ref())?);
    let text = a.element.as_deref().unwrap_or_default();
    let x = GroupAlgebraElement::parse(&spec, text).map_err(from_err)?;
    let mut out = json!({ "element": x.to_string(), "backend": spec.backend_name() });
    if let Some(n) = a.lambda_lower {
        if n == 0 {
            return Err(CliError::new("BadOrder", "--lambda-lower needs n >= 1"));
        }
        let m = moments(&x, n).map_err(from_err)?;
        let low = lambda_norm_lower(&x, n, a.precision_k).map_err(from_err)?;
        out["lambda_lower"] = json!({
            "n": n,
            "moment": fmt_exact(&m[n]),
            "root": 2 * n,
            "lower": fmt_exact(&low),
            "approx": to_f64(&low),
        });
    }
    if a.l1 {
        out["l1"] = json!(fmt_exact(&x.l1_norm()));
    }
    if a.two_norm {
        out["two_norm"] = interval_json(&x.two_norm(a.precision_k));
    }
    if a.cstar {
        let p = CstarLambdaPresentation::new((*spec).clone());
        let report = p.norm(&x, a.precision_k, a.budget);
        out["cstar"] = json!({
            "two_sided": report.is_two_sided(),
            "interval": interval_json(&report.interval()),
        });
    }
    Ok(record("norm-group", out))
}

fn parse_bind(text: &str) -> R<(u32, u64)> {
    let bad = || CliError::new("BadBinding", format!("`{text}` is not `cN=INDEX`"));
    let (c, idx) = text.split_once('=').ok_or_else(bad)?;
    let c = c.trim().strip_prefix('c').and_then(|n| n.parse().ok()).ok_or_else(bad)?;
    Ok((c, idx.trim().parse().map_err(|_| bad())?))
}

fn eval_on<P: Presentation>(p: P, a: &EvalArgs) -> R<Value> {
    let name = p.name();
    let sig = p.signature();
    let mut s = PresentationStructure::new(p).with_norm_budget(a.norm_budget);
    for b in &a.binds {
        let (c, idx) = parse_bind(b)?;
        s = s.bind(c, idx);
    }
    let text = if Path::new(&a.sentence).is_file() { read_file(Path::new(&a.sentence))? } else { a.sentence.clone() };
    let phi = parse_formula(&text, &sig).map_err(from_err)?;
    let r = eval::eval(&phi, &s, &EvalBudget::new(a.budget_n, a.precision_k)).map_err(from_err)?;
    let mut body = r.to_json();
    body["presentation"] = json!(name);
    body["sentence"] = json!(print_formula(&phi));
    Ok(record("eval", body))
}

fn run_eval(a: EvalArgs) -> R<Value> {
    match a.presentation {
        PresentationName::R => eval_on(RPresentation::new(), &a),
        PresentationName::C2w => eval_on(C2wPresentation::new(), &a),
        PresentationName::L => eval_on(GroupVnaPresentation::new(group_spec(a.group.as_ref())?), &a),
        PresentationName::Cstar => eval_on(CstarLambdaPresentation::new(group_spec(a.group.as_ref())?), &a),
    }
}

/// `qf`, `forallM`, `existsM`.
pub fn parse_prefix(text: &str) -> R<PrefixClass> {
    PrefixClass::parse(&text.trim().to_ascii_lowercase())
        .ok_or_else(|| CliError::new("BadPrefix", format!("`{text}` is not qf, forallM or existsM")))
}

/// Least `n >= 1` at which the prefix class fits.
pub fn least_level(class: PrefixClass) -> u32 {
    match class {
        PrefixClass::QuantifierFree => 1,
        PrefixClass::ForallN(m) => m.div_ceil(2).max(1),
        PrefixClass::ExistsN(m) => (m / 2 + 1).max(1),
    }
}

fn run_classify(a: ClassifyArgs) -> R<Value> {
    let relation = Relation::parse(&a.relation)
        .ok_or_else(|| CliError::new("BadRelation", format!("`{}` is not lt, le, gt or ge", a.relation)))?;
    let (label, n, prefix) = match (&a.code, &a.prefix) {
        (Some(code), _) => {
            let sig = signature(&a.signature)?;
            let code = code_arg(code)?;
            let phi = coding::decode(&code, &sig).map_err(from_err)?;
            let class = crate::formula::classify_prefix(&phi).map_err(from_err)?;
            let n = a.n.unwrap_or_else(|| least_level(class));
            (classify(&code, &sig, relation, n).map_err(from_err)?, n, class)
        }
        (None, Some(p)) => {
            let class = parse_prefix(p)?;
            let n = a.n.unwrap_or_else(|| least_level(class));
            (classify_prefix_label(class, relation, n).map_err(from_err)?, n, class)
        }
        (None, None) => return Err(CliError::new("MissingInput", "give --code or --prefix")),
    };
    Ok(record(
        "classify",
        json!({ "label": label, "n": n, "prefix": prefix.label(), "relation": relation.symbol() }),
    ))
}

fn forall_strategy(name: &str) -> R<Box<dyn Strategy>> {
    if name == "pass" {
        return Ok(Box::new(PassThrough));
    }
    if let Some(seed) = name.strip_prefix("random:") {
        let seed = seed
            .parse()
            .map_err(|_| CliError::new("BadStrategy", format!("bad seed in `{name}`")))?;
        return Ok(Box::new(RandomForall::new(seed)));
    }
    let text = read_file(Path::new(name))?;
    let turns = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_condition(l).map(|c| c.bounds.into_iter().collect()))
        .collect::<R<Vec<Vec<Bound>>>>()?;
    Ok(Box::new(Scripted::new(turns)))
}

fn exists_strategy(name: &str) -> R<Box<dyn Strategy>> {
    match name {
        "universal" => Ok(Box::new(exists_strategy_universal())),
        "pass" => Ok(Box::new(PassThrough)),
        _ => Err(CliError::new("BadStrategy", format!("no ∃-strategy `{name}`"))),
    }
}

fn run_force(a: ForceArgs) -> R<Value> {
    if a.instance != "metric" {
        return Err(CliError::new("UnknownInstance", format!("no instance `{}`", a.instance)));
    }
    let inst = MetricInstance::new();
    let sig = Signature::metric();
    match a.op {
        ForceOp::Game {
            strategy_forall,
            strategy_exists,
            rounds,
            out,
        } => {
            let mut fa = forall_strategy(&strategy_forall)?;
            let mut ex = exists_strategy(&strategy_exists)?;
            let t = play_game(fa.as_mut(), ex.as_mut(), rounds, &inst).map_err(from_err)?;
            let space = compile(&t, &inst).map_err(from_err)?;
            let jsonl = t.to_jsonl();
            if let Some(path) = out {
                std::fs::write(&path, &jsonl)
                    .map_err(|e| CliError::new("Io", format!("{}: {e}", path.display())))?;
            }
            let moves: Vec<Value> = jsonl.lines().skip(1).map(|l| serde_json::from_str(l).unwrap()).collect();
            Ok(record(
                "game",
                json!({
                    "forall": fa.name(),
                    "exists": ex.name(),
                    "rounds": t.rounds(),
                    "moves": moves,
                    "final": t.last().to_string(),
                    "compiled": space.to_json(),
                    "metric_axioms": space.is_pseudometric(),
                }),
            ))
        }
        ForceOp::Check {
            condition,
            psi,
            var,
            r,
            budget,
        } => {
            let p = parse_condition(&condition)?;
            let psi = parse_formula(&psi, &sig).map_err(from_err)?;
            let r = exact_arg(&r)?;
            let ans = forces_sup_leq(&p, &psi, &var, &r, budget, &inst).map_err(from_err)?;
            let mut body = json!({
                "condition": p.to_string(),
                "psi": print_formula(&psi),
                "r": fmt_exact(&r),
                "answer": ans.label(),
            });
            match &ans {
                ForcingAnswer::No(w) => {
                    body["witness"] = json!({
                        "theta": print_formula(&w.theta),
                        "granularity": w.granularity,
                        "delta": fmt_exact(&w.delta),
                        "fresh": format!("c{}", w.fresh),
                        "value": fmt_exact(&w.value),
                        "space": w.space.to_json(),
                    })
                }
                ForcingAnswer::Unknown(why) => body["reason"] = json!(why),
                ForcingAnswer::Yes => {}
            }
            Ok(record("force-check", body))
        }
        ForceOp::Fp {
            condition,
            formula,
            depth,
            budget,
        } => {
            let p = parse_condition(&condition)?;
            let phi = parse_formula(&formula, &sig).map_err(from_err)?;
            let est = fp_estimate(&p, &phi, depth, budget, &inst).map_err(from_err)?;
            Ok(record(
                "force-fp",
                json!({
                    "condition": p.to_string(),
                    "formula": print_formula(&phi),
                    "lower": est.lower.as_ref().map(fmt_exact),
                    "upper": est.upper.as_ref().map(fmt_exact),
                }),
            ))
        }
        ForceOp::Condition { condition } => {
            let p = parse_condition(&condition)?;
            let ok = inst.is_condition(&p).map_err(from_err)?;
            let model = if ok { inst.witness(&p).map_err(from_err)?.map(|s| s.to_json()) } else { None };
            Ok(record("force-condition", json!({ "condition": p.to_string(), "is_condition": ok, "model": model })))
        }
        ForceOp::Replay { transcript } => {
            let text = read_file(&transcript)?;
            let t = transcript_from_jsonl(&text).map_err(from_err)?;
            for (i, m) in t.moves.iter().enumerate() {
                let prev = if i == 0 { Condition::empty() } else { t.moves[i - 1].condition.clone() };
                if !m.condition.extends(&prev) || !inst.is_condition(&m.condition).map_err(from_err)? {
                    return Err(CliError::new(
                        "IllegalMove",
                        format!("move {} by {} is not a legal extension", i + 1, m.player),
                    ));
                }
            }
            let space = compile(&t, &inst).map_err(from_err)?;
            Ok(record(
                "replay",
                json!({
                    "rounds": t.rounds(),
                    "byte_exact": t.to_jsonl() == text,
                    "compiled": space.to_json(),
                    "metric_axioms": space.is_pseudometric(),
                }),
            ))
        }
    }
}

fn run_selftest(a: SelftestArgs) -> Vec<Value> {
    let results = match a.criterion {
        Some(n) => vec![selftest::run_criterion(n)],
        None => selftest::run_all(),
    };
    let passed = results.iter().filter(|r| r.pass).count();
    let mut out: Vec<Value> = results
        .iter()
        .map(|r| serde_json::from_str(&r.to_line()).expect("selftest line is JSON"))
        .collect();
    out.push(record("selftest-summary", json!({ "passed": passed, "total": results.len() })));
    out
}

/// Whether a record reports a failed check.
pub fn is_failure(v: &Value) -> bool {
    v.get("pass") == Some(&json!(false))
}
