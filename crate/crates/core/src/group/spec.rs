//! Finitely generated groups with a word-problem solver.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use super::GroupError;

/// `+(g + 1)` is generator `g`, `-(g + 1)` its inverse.
pub type Letter = i32;
pub type Word = Vec<Letter>;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as i32 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn generator_of(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

/// Position of a letter in the shortlex alphabet `a, a^-1, b, b^-1, ...`.
pub fn letter_rank(l: Letter) -> usize {
    2 * generator_of(l) + usize::from(l < 0)
}

pub fn formal_inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| -l).collect()
}

/// Cancels adjacent `x x^-1` pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    /// `mul[i][j]` is the index of `g_i g_j`.
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
    /// Group element of each generator.
    pub generators: Vec<usize>,
    /// Shortlex-least word for each element.
    pub words: Vec<Word>,
    pub index: HashMap<Word, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Free,
    /// Rank equals the number of generators.
    FreeAbelian,
    FiniteTable(FiniteTable),
    Rewriting {
        rules: Vec<(Word, Word)>,
        budget: usize,
        /// Declared group order, when finite.
        order: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub generators: Vec<String>,
    pub backend: Backend,
}

pub const DEFAULT_REWRITE_BUDGET: usize = 100_000;

impl GroupSpec {
    pub fn free(generators: &[&str]) -> GroupSpec {
        GroupSpec {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            backend: Backend::Free,
        }
    }

    pub fn free_abelian(generators: &[&str]) -> GroupSpec {
        GroupSpec {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            backend: Backend::FreeAbelian,
        }
    }

    /// `ℤ` with generator `u`.
    pub fn integers() -> GroupSpec {
        GroupSpec::free_abelian(&["u"])
    }

    /// Group from a row-major multiplication table over `0..order`.
    pub fn finite_table(
        generators: &[&str],
        table: Vec<Vec<usize>>,
        generator_elements: Vec<usize>,
    ) -> Result<GroupSpec, GroupError> {
        let t = build_table(table, generator_elements)?;
        Ok(GroupSpec {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            backend: Backend::FiniteTable(t),
        })
    }

    /// `ℤ/n` with generator `a`.
    pub fn cyclic(n: usize) -> GroupSpec {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GroupSpec::finite_table(&["a"], table, vec![1 % n]).expect("cyclic table")
    }

    pub fn rewriting(generators: &[&str], rules: Vec<(Word, Word)>) -> GroupSpec {
        GroupSpec {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            backend: Backend::Rewriting {
                rules,
                budget: DEFAULT_REWRITE_BUDGET,
                order: None,
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::Free => "free",
            Backend::FreeAbelian => "abelian",
            Backend::FiniteTable(_) => "table",
            Backend::Rewriting { .. } => "rewriting",
        }
    }

    /// Group order when known to be finite.
    pub fn order(&self) -> Option<usize> {
        match &self.backend {
            Backend::FiniteTable(t) => Some(t.mul.len()),
            Backend::Rewriting { order, .. } => *order,
            Backend::Free | Backend::FreeAbelian => {
                if self.generators.is_empty() {
                    Some(1)
                } else {
                    None
                }
            }
        }
    }

    /// Whether normal-form length is subadditive and inverse-invariant,
    /// so long words can be pruned in moment expansions.
    pub fn length_is_norm(&self) -> bool {
        matches!(self.backend, Backend::Free | Backend::FreeAbelian)
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, GroupError> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    fn check_letters(&self, w: &[Letter]) -> Result<(), GroupError> {
        for &l in w {
            if l == 0 || generator_of(l) >= self.rank() {
                return Err(GroupError::UnknownGenerator(format!("letter {l}")));
            }
        }
        Ok(())
    }

    pub fn normal_form(&self, w: &[Letter]) -> Result<Word, GroupError> {
        self.check_letters(w)?;
        Ok(match &self.backend {
            Backend::Free => free_reduce(w),
            Backend::FreeAbelian => abelian_word(&self.exponents(w)),
            Backend::FiniteTable(t) => t.words[t.evaluate(w)].clone(),
            Backend::Rewriting { rules, budget, .. } => rewrite(w, rules, *budget)?,
        })
    }

    fn exponents(&self, w: &[Letter]) -> Vec<i64> {
        let mut e = vec![0i64; self.rank()];
        for &l in w {
            e[generator_of(l)] += if l > 0 { 1 } else { -1 };
        }
        e
    }

    /// Product of two normal forms, in normal form.
    pub fn multiply(&self, a: &[Letter], b: &[Letter]) -> Result<Word, GroupError> {
        match &self.backend {
            Backend::Free => {
                let mut k = 0;
                while k < a.len() && k < b.len() && a[a.len() - 1 - k] == -b[k] {
                    k += 1;
                }
                let mut out = Vec::with_capacity(a.len() + b.len() - 2 * k);
                out.extend_from_slice(&a[..a.len() - k]);
                out.extend_from_slice(&b[k..]);
                Ok(out)
            }
            Backend::FreeAbelian => {
                let mut e = self.exponents(a);
                for (x, y) in e.iter_mut().zip(self.exponents(b)) {
                    *x += y;
                }
                Ok(abelian_word(&e))
            }
            Backend::FiniteTable(t) => {
                let i = t.element_of(a);
                let j = t.element_of(b);
                Ok(t.words[t.mul[i][j]].clone())
            }
            Backend::Rewriting { .. } => {
                let mut w = a.to_vec();
                w.extend_from_slice(b);
                self.normal_form(&w)
            }
        }
    }

    /// Inverse of a normal form, in normal form.
    pub fn inverse(&self, w: &[Letter]) -> Result<Word, GroupError> {
        match &self.backend {
            Backend::Free => Ok(formal_inverse(w)),
            Backend::FreeAbelian => {
                let e: Vec<i64> = self.exponents(w).iter().map(|x| -x).collect();
                Ok(abelian_word(&e))
            }
            Backend::FiniteTable(t) => Ok(t.words[t.inverse[t.element_of(w)]].clone()),
            Backend::Rewriting { .. } => self.normal_form(&formal_inverse(w)),
        }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "e".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let name = &self.generators[generator_of(w[i])];
            let run = (j - i) as i64 * if w[i] > 0 { 1 } else { -1 };
            parts.push(if run == 1 {
                name.clone()
            } else {
                format!("{name}^{run}")
            });
            i = j;
        }
        parts.join("*")
    }

    /// Parses `e`, `1`, or factors `g`, `g^n` joined by `*`.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let text = text.trim();
        if text == "e" || text == "1" {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        for factor in text.split(|c: char| c == '*' || c.is_whitespace()) {
            if factor.is_empty() {
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| GroupError::BadElement(format!("bad exponent in `{factor}`")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            if name == "e" {
                continue;
            }
            let g = self.generator_index(name)?;
            for _ in 0..exp.unsigned_abs() {
                out.push(letter(g, exp < 0));
            }
        }
        Ok(out)
    }

    /// Normal forms in shortlex order, generated by extending shorter
    /// normal forms one letter at a time (normal forms are closed under
    /// prefixes for every backend). Stops after `limit` words or once all
    /// words up to `max_len` have been produced.
    pub fn normal_forms(&self, limit: usize, max_len: usize) -> Result<Vec<Word>, GroupError> {
        let mut out: Vec<Word> = vec![vec![]];
        let mut layer: Vec<Word> = vec![vec![]];
        let mut alphabet: Vec<Letter> = (0..self.rank())
            .flat_map(|g| [letter(g, false), letter(g, true)])
            .collect();
        alphabet.sort_by_key(|&l| letter_rank(l));
        let mut len = 0;
        while out.len() < limit && !layer.is_empty() && len < max_len {
            len += 1;
            let mut next = Vec::new();
            for w in &layer {
                for &l in &alphabet {
                    let mut cand = w.clone();
                    cand.push(l);
                    if self.normal_form(&cand)? == cand {
                        next.push(cand);
                    }
                }
            }
            for w in &next {
                if out.len() >= limit {
                    break;
                }
                out.push(w.clone());
            }
            layer = next;
        }
        Ok(out)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}<{}>", self.backend_name(), self.generators.join(","))
    }
}

fn abelian_word(e: &[i64]) -> Word {
    let mut w = Vec::new();
    for (g, &x) in e.iter().enumerate() {
        for _ in 0..x.unsigned_abs() {
            w.push(letter(g, x < 0));
        }
    }
    w
}

fn find(hay: &[Letter], needle: &[Letter]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    hay.windows(needle.len()).position(|win| win == needle)
}

fn rewrite(w: &[Letter], rules: &[(Word, Word)], budget: usize) -> Result<Word, GroupError> {
    let mut cur = free_reduce(w);
    let mut steps = 0;
    'outer: loop {
        for (lhs, rhs) in rules {
            if let Some(at) = find(&cur, lhs) {
                steps += 1;
                if steps > budget {
                    return Err(GroupError::RewritingDiverged(budget));
                }
                let mut next = cur[..at].to_vec();
                next.extend_from_slice(rhs);
                next.extend_from_slice(&cur[at + lhs.len()..]);
                cur = free_reduce(&next);
                continue 'outer;
            }
        }
        return Ok(cur);
    }
}

impl FiniteTable {
    fn evaluate(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.identity, |acc, &l| {
            let g = self.generators[generator_of(l)];
            let g = if l > 0 { g } else { self.inverse[g] };
            self.mul[acc][g]
        })
    }

    fn element_of(&self, normal: &[Letter]) -> usize {
        match self.index.get(normal) {
            Some(&i) => i,
            None => self.evaluate(normal),
        }
    }
}

fn build_table(mul: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<FiniteTable, GroupError> {
    let n = mul.len();
    let bad = |m: &str| Err(GroupError::BadTable(m.to_string()));
    if n == 0 || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return bad("table must be n x n with entries below n");
    }
    let Some(identity) = (0..n).find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x)) else {
        return bad("no identity element");
    };
    let mut inverse = vec![usize::MAX; n];
    for x in 0..n {
        match (0..n).find(|&y| mul[x][y] == identity && mul[y][x] == identity) {
            Some(y) => inverse[x] = y,
            None => return bad("an element has no inverse"),
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    return bad("multiplication is not associative");
                }
            }
        }
    }
    if generators.iter().any(|&g| g >= n) {
        return bad("generator element out of range");
    }
    let mut words: Vec<Option<Word>> = vec![None; n];
    words[identity] = Some(vec![]);
    let mut queue = VecDeque::from([identity]);
    let mut alphabet: Vec<Letter> = (0..generators.len())
        .flat_map(|g| [letter(g, false), letter(g, true)])
        .collect();
    alphabet.sort_by_key(|&l| letter_rank(l));
    while let Some(x) = queue.pop_front() {
        for &l in &alphabet {
            let g = generators[generator_of(l)];
            let g = if l > 0 { g } else { inverse[g] };
            let y = mul[x][g];
            if words[y].is_none() {
                let mut w = words[x].clone().unwrap();
                w.push(l);
                words[y] = Some(w);
                queue.push_back(y);
            }
        }
    }
    if words.iter().any(|w| w.is_none()) {
        return bad("generators do not generate the table");
    }
    let words: Vec<Word> = words.into_iter().map(|w| w.unwrap()).collect();
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    Ok(FiniteTable {
        mul,
        identity,
        inverse,
        generators,
        words,
        index,
    })
}

/// Reads a group description:
///
/// ```text
/// generators = a b
/// backend = free | abelian | table | rewriting
/// order = 2              # table (required) or rewriting (optional)
/// table = 0 1 1 0        # row-major, table backend
/// gen a = 1              # element of each generator, table backend
/// a*a -> e               # rewriting rules
/// budget = 100000        # rewriting step budget
/// ```
pub fn parse_group_config(text: &str) -> Result<GroupSpec, GroupError> {
    let mut generators: Option<Vec<String>> = None;
    let mut backend: Option<String> = None;
    let mut order: Option<usize> = None;
    let mut table: Option<Vec<usize>> = None;
    let mut gens: HashMap<String, usize> = HashMap::new();
    let mut rules_text: Vec<(usize, String, String)> = Vec::new();
    let mut budget = DEFAULT_REWRITE_BUDGET;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |m: String| GroupError::BadConfig { line, message: m };
        if let Some((lhs, rhs)) = content.split_once("->") {
            rules_text.push((line, lhs.trim().to_string(), rhs.trim().to_string()));
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(bad(format!("cannot read `{content}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        let number = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("`{v}` is not a natural")));
        match key.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["generators"] => {
                generators = Some(value.split_whitespace().map(String::from).collect())
            }
            ["backend"] => backend = Some(value.to_string()),
            ["order"] => order = Some(number(value)?),
            ["budget"] => budget = number(value)?,
            ["table"] => {
                table = Some(value.split_whitespace().map(number).collect::<Result<_, _>>()?)
            }
            ["gen", name] => {
                gens.insert(name.to_string(), number(value)?);
            }
            _ => return Err(bad(format!("unknown key `{key}`"))),
        }
    }
    let cfg = |m: &str| GroupError::BadConfig {
        line: 0,
        message: m.to_string(),
    };
    let generators = generators.ok_or_else(|| cfg("missing `generators`"))?;
    for g in &generators {
        let ok = g.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && g.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && g != "e";
        if !ok {
            return Err(cfg(&format!("`{g}` is not a generator name")));
        }
    }
    let names: Vec<&str> = generators.iter().map(String::as_str).collect();
    let spec = match backend.as_deref().unwrap_or("free") {
        "free" => GroupSpec::free(&names),
        "abelian" => GroupSpec::free_abelian(&names),
        "table" => {
            let order = order.ok_or_else(|| cfg("table backend needs `order`"))?;
            let flat = table.ok_or_else(|| cfg("table backend needs `table`"))?;
            if flat.len() != order * order {
                return Err(cfg("table must have order^2 entries"));
            }
            let rows = flat.chunks(order).map(|r| r.to_vec()).collect();
            let elems = names
                .iter()
                .map(|g| gens.get(*g).copied().ok_or_else(|| cfg(&format!("missing `gen {g}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            GroupSpec::finite_table(&names, rows, elems)?
        }
        "rewriting" => {
            let base = GroupSpec::free(&names);
            let mut rules = Vec::new();
            for (line, l, r) in rules_text.drain(..) {
                let word = |t: &str| {
                    base.parse_word(t).map_err(|e| GroupError::BadConfig {
                        line,
                        message: e.to_string(),
                    })
                };
                rules.push((free_reduce(&word(&l)?), free_reduce(&word(&r)?)));
            }
            GroupSpec {
                generators: generators.clone(),
                backend: Backend::Rewriting {
                    rules,
                    budget,
                    order,
                },
            }
        }
        other => return Err(cfg(&format!("unknown backend `{other}`"))),
    };
    if !rules_text.is_empty() {
        return Err(GroupError::BadConfig {
            line: rules_text[0].0,
            message: "rules need `backend = rewriting`".into(),
        });
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_forms_per_backend() {
        let f = GroupSpec::free(&["a", "b"]);
        let w = f.parse_word("a*a^-1*b").unwrap();
        assert_eq!(f.normal_form(&w).unwrap(), f.parse_word("b").unwrap());
        let z2 = GroupSpec::free_abelian(&["a", "b"]);
        let ba = z2.parse_word("b*a").unwrap();
        assert_eq!(z2.format_word(&z2.normal_form(&ba).unwrap()), "a*b");
        let c2 = GroupSpec::cyclic(2);
        assert!(c2.normal_form(&c2.parse_word("a*a").unwrap()).unwrap().is_empty());
        assert!(matches!(
            f.parse_word("c"),
            Err(GroupError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn rewriting_backend_and_budget() {
        let spec = parse_group_config(
            "generators = a b\nbackend = rewriting\na*a -> e\nb*b -> e\nb*a -> a*b\na^-1 -> a\nb^-1 -> b\n",
        )
        .unwrap();
        let w = spec.parse_word("b*a*b*a*a").unwrap();
        assert_eq!(spec.format_word(&spec.normal_form(&w).unwrap()), "a");
        let looping = GroupSpec::rewriting(&["a", "b"], vec![(vec![1, 2], vec![2, 1]), (vec![2, 1], vec![1, 2])]);
        assert_eq!(
            looping.normal_form(&[1, 2]),
            Err(GroupError::RewritingDiverged(DEFAULT_REWRITE_BUDGET))
        );
    }

    #[test]
    fn table_config() {
        let spec = parse_group_config(
            "generators = a\nbackend = table\norder = 3\ntable = 0 1 2 1 2 0 2 0 1\ngen a = 1\n",
        )
        .unwrap();
        let w = spec.normal_form(&[1, 1]).unwrap();
        assert_eq!(w, vec![-1]);
        assert_eq!(spec.inverse(&[1]).unwrap(), vec![-1]);
        assert!(parse_group_config("generators = a\nbackend = table\norder = 2\ntable = 0 1 1 1\ngen a = 1\n").is_err());
    }

    #[test]
    fn shortlex_normal_forms() {
        let f = GroupSpec::free(&["a", "b"]);
        let nf = f.normal_forms(100, 3).unwrap();
        assert_eq!(nf.len(), 1 + 4 + 12 + 36);
        assert_eq!(nf[1], vec![1]);
        assert_eq!(nf[2], vec![-1]);
        let c3 = GroupSpec::cyclic(3);
        assert_eq!(c3.normal_forms(100, 10).unwrap().len(), 3);
    }
}
