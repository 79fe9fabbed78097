//! Evaluation. Formulas are first compiled: variables become slots in a flat
//! environment, predicates and letters are resolved once.

use std::collections::BTreeSet;

use super::{Assignment, EvalError, Formula, Language, ParseError, Predicate, Registry, WordStructure};
use crate::automata::{words_up_to, Alphabet, Sym};
use crate::structures::NumRelation;

/// Default number of extra universe sizes checked by [`relation_of`].
pub const DEFAULT_WINDOW: u32 = 4;

enum SolveWith {
    Pred(Predicate),
    Equal,
}

/// A conjunct that pins down the witness of an existential: its arguments are
/// slots, except for one hole standing for the quantified variable.
struct Solver {
    with: SolveWith,
    args: Vec<Option<usize>>,
}

enum Node {
    Const(bool),
    Letter { sym: Sym, slot: usize },
    Pred { pred: Predicate, slots: Vec<usize> },
    Less(usize, usize),
    Equal(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Exists { slot: usize, body: Box<Node>, solver: Option<Solver> },
    Forall { slot: usize, body: Box<Node> },
    ModExists { q: u64, r: u64, slot: usize, body: Box<Node> },
    Majority { slot: usize, body: Box<Node> },
    Lindstrom { language: Language, slot: usize, bodies: Vec<Node> },
}

struct Compiler<'a> {
    registry: &'a Registry,
    alphabet: Option<&'a Alphabet>,
    scope: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn lookup(&self, v: &str) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|&(_, s)| s)
            .ok_or_else(|| EvalError::Unassigned(v.to_string()))
    }

    fn bind<T>(&mut self, v: &str, f: impl FnOnce(&mut Self, usize) -> Result<T, EvalError>) -> Result<T, EvalError> {
        let slot = self.slots;
        self.slots += 1;
        self.scope.push((v.to_string(), slot));
        let out = f(self, slot);
        self.scope.pop();
        out
    }

    fn compile(&mut self, f: &Formula) -> Result<Node, EvalError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Letter { symbol, var } => {
                let alphabet = self.alphabet.ok_or_else(|| EvalError::LetterInRelation(symbol.clone()))?;
                let sym = alphabet.index_of(symbol).ok_or_else(|| EvalError::UnknownLetter(symbol.clone()))?;
                Node::Letter { sym, slot: self.lookup(var)? }
            }
            Formula::Num { name, params, args } => {
                let pred = self
                    .registry
                    .predicate(name, params)
                    .ok_or_else(|| ParseError::UnknownPredicate(name.clone()))?;
                if pred.arity != args.len() {
                    return Err(ParseError::Arity { name: name.clone(), expected: pred.arity, got: args.len() }.into());
                }
                let slots = args.iter().map(|a| self.lookup(a)).collect::<Result<_, _>>()?;
                Node::Pred { pred, slots }
            }
            Formula::Less(a, b) => Node::Less(self.lookup(a)?, self.lookup(b)?),
            Formula::Equal(a, b) => Node::Equal(self.lookup(a)?, self.lookup(b)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(gs) => Node::And(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Iff(a, b) => Node::Iff(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, g) => self.bind(v, |c, slot| {
                let body = c.compile(g)?;
                let solver = find_solver(&body, slot);
                Ok(Node::Exists { slot, body: Box::new(body), solver })
            })?,
            Formula::Forall(v, g) => self.bind(v, |c, slot| Ok(Node::Forall { slot, body: Box::new(c.compile(g)?) }))?,
            Formula::Majority(v, g) => {
                self.bind(v, |c, slot| Ok(Node::Majority { slot, body: Box::new(c.compile(g)?) }))?
            }
            Formula::ModExists { q, r, var, body } => self.bind(var, |c, slot| {
                Ok(Node::ModExists { q: *q as u64, r: *r as u64, slot, body: Box::new(c.compile(body)?) })
            })?,
            Formula::Lindstrom { language, var, bodies } => {
                let lang = self
                    .registry
                    .language(language)
                    .ok_or_else(|| ParseError::UnknownLanguage(language.clone()))?
                    .clone();
                check_lindstrom_arity(language, &lang, bodies.len())?;
                self.bind(var, |c, slot| {
                    let bodies = bodies.iter().map(|g| c.compile(g)).collect::<Result<_, _>>()?;
                    Ok(Node::Lindstrom { language: lang, slot, bodies })
                })?
            }
        })
    }
}

fn check_lindstrom_arity(name: &str, lang: &Language, got: usize) -> Result<(), EvalError> {
    let expected = lang.alphabet.len().saturating_sub(1);
    if got != expected {
        return Err(ParseError::LindstromArity { name: name.to_string(), expected, got }.into());
    }
    Ok(())
}

fn find_solver(body: &Node, slot: usize) -> Option<Solver> {
    let conjuncts: &[Node] = match body {
        Node::And(parts) => parts,
        other => std::slice::from_ref(other),
    };
    conjuncts.iter().find_map(|c| {
        let (with, slots) = match c {
            Node::Pred { pred, slots } if pred.has_solver() => (SolveWith::Pred(pred.clone()), slots.clone()),
            Node::Equal(a, b) => (SolveWith::Equal, vec![*a, *b]),
            _ => return None,
        };
        if slots.iter().filter(|&&s| s == slot).count() != 1 {
            return None;
        }
        let args = slots.iter().map(|&s| (s != slot).then_some(s)).collect();
        Some(Solver { with, args })
    })
}

/// A formula compiled against a registry, ready to evaluate many times.
pub struct Compiled {
    root: Node,
    slots: usize,
    free: Vec<String>,
}

impl Compiled {
    /// `free` fixes the order in which values of free variables are passed to
    /// [`Compiled::holds`]. Letter atoms need an alphabet.
    pub fn new(
        f: &Formula,
        registry: &Registry,
        alphabet: Option<&Alphabet>,
        free: &[String],
    ) -> Result<Self, EvalError> {
        let mut c = Compiler { registry, alphabet, scope: Vec::new(), slots: 0 };
        for v in free {
            c.scope.push((v.clone(), c.slots));
            c.slots += 1;
        }
        let root = c.compile(f)?;
        Ok(Compiled { root, slots: c.slots, free: free.to_vec() })
    }

    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Evaluates on positions `1..=m`; `word`, when given, has length `m`.
    pub fn holds(&self, word: Option<&[Sym]>, m: usize, values: &[u32]) -> bool {
        debug_assert_eq!(values.len(), self.free.len());
        let mut env = vec![0u64; self.slots];
        for (i, &v) in values.iter().enumerate() {
            env[i] = v as u64;
        }
        let ctx = Ctx { word: word.unwrap_or(&[]), m: m as u64 };
        ctx.eval(&self.root, &mut env)
    }
}

struct Ctx<'a> {
    word: &'a [Sym],
    m: u64,
}

impl Ctx<'_> {
    fn eval(&self, n: &Node, env: &mut Vec<u64>) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::Letter { sym, slot } => self.word[env[*slot] as usize - 1] == *sym,
            Node::Pred { pred, slots } => {
                let mut args = [0u64; 8];
                if slots.len() <= args.len() {
                    for (a, &s) in args.iter_mut().zip(slots) {
                        *a = env[s];
                    }
                    pred.holds(&args[..slots.len()], self.m)
                } else {
                    let args: Vec<u64> = slots.iter().map(|&s| env[s]).collect();
                    pred.holds(&args, self.m)
                }
            }
            Node::Less(a, b) => env[*a] < env[*b],
            Node::Equal(a, b) => env[*a] == env[*b],
            Node::Not(g) => !self.eval(g, env),
            Node::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Node::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Node::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Node::Iff(a, b) => self.eval(a, env) == self.eval(b, env),
            Node::Exists { slot, body, solver } => match solver {
                Some(s) => {
                    let known: Vec<Option<u64>> = s.args.iter().map(|a| a.map(|i| env[i])).collect();
                    let value = match &s.with {
                        SolveWith::Pred(p) => p.solve(&known, self.m).flatten(),
                        SolveWith::Equal => known[0].or(known[1]),
                    };
                    match value {
                        Some(c) if (1..=self.m).contains(&c) => {
                            env[*slot] = c;
                            self.eval(body, env)
                        }
                        _ => false,
                    }
                }
                None => (1..=self.m).any(|c| {
                    env[*slot] = c;
                    self.eval(body, env)
                }),
            },
            Node::Forall { slot, body } => (1..=self.m).all(|c| {
                env[*slot] = c;
                self.eval(body, env)
            }),
            Node::ModExists { q, r, slot, body } => self.count(*slot, body, env) % q == *r,
            Node::Majority { slot, body } => 2 * self.count(*slot, body, env) > self.m,
            Node::Lindstrom { language, slot, bodies } => {
                let t = bodies.len();
                let word: Vec<Sym> = (1..=self.m)
                    .map(|c| {
                        env[*slot] = c;
                        bodies.iter().position(|g| self.eval(g, env)).unwrap_or(t)
                    })
                    .collect();
                language.contains(&word)
            }
        }
    }

    fn count(&self, slot: usize, body: &Node, env: &mut Vec<u64>) -> u64 {
        (1..=self.m)
            .filter(|&c| {
                env[slot] = c;
                self.eval(body, env)
            })
            .count() as u64
    }
}

fn values_for(f: &Formula, alpha: &Assignment, m: usize) -> Result<(Vec<String>, Vec<u32>), EvalError> {
    let mut names = Vec::new();
    let mut values = Vec::new();
    for v in f.free_vars() {
        let value = *alpha.get(&v).ok_or_else(|| EvalError::Unassigned(v.clone()))?;
        if value == 0 || value as usize > m {
            return Err(EvalError::OutOfRange { var: v, value, m });
        }
        names.push(v);
        values.push(value);
    }
    Ok((names, values))
}

/// Truth of `f` on the word structure under `alpha`.
pub fn eval(f: &Formula, s: &WordStructure, alpha: &Assignment, registry: &Registry) -> Result<bool, EvalError> {
    let (names, values) = values_for(f, alpha, s.len())?;
    let c = Compiled::new(f, registry, Some(&s.alphabet), &names)?;
    Ok(c.holds(Some(&s.word), s.len(), &values))
}

/// Truth of a letter-free formula on the bare universe `1..=m`.
pub fn eval_letterless(f: &Formula, m: usize, alpha: &Assignment, registry: &Registry) -> Result<bool, EvalError> {
    let (names, values) = values_for(f, alpha, m)?;
    let c = Compiled::new(f, registry, None, &names)?;
    Ok(c.holds(None, m, &values))
}

/// Words of length at most `max_len` satisfying the sentence `f`.
pub fn language_of(
    f: &Formula,
    alphabet: &Alphabet,
    max_len: usize,
    registry: &Registry,
) -> Result<BTreeSet<Vec<Sym>>, EvalError> {
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(EvalError::Unassigned(v));
    }
    let c = Compiled::new(f, registry, Some(alphabet), &[])?;
    Ok(words_up_to(alphabet.len(), max_len).filter(|w| c.holds(Some(w), w.len(), &[])).collect())
}

/// Tuples over `1..=bound` (in the order of `vars`) satisfying `f` on every
/// universe size m with `c_max <= m <= c_max + window`.
pub fn relation_of(
    f: &Formula,
    vars: &[String],
    bound: u32,
    window: u32,
    registry: &Registry,
) -> Result<NumRelation, EvalError> {
    let free = f.free_vars();
    let wanted: BTreeSet<String> = vars.iter().cloned().collect();
    if free != wanted || wanted.len() != vars.len() {
        return Err(EvalError::FreeVars { expected: vars.to_vec(), found: free.into_iter().collect() });
    }
    let c = Compiled::new(f, registry, None, vars)?;
    let n = vars.len();
    let mut rel = NumRelation::new(n, bound);
    let mut tuple = vec![1u32; n];
    if n == 0 || bound == 0 {
        return Ok(rel);
    }
    loop {
        let cmax = *tuple.iter().max().unwrap();
        if (cmax..=cmax + window).all(|m| c.holds(None, m as usize, &tuple)) {
            rel.insert(tuple.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(rel);
            }
            i -= 1;
            if tuple[i] < bound {
                tuple[i] += 1;
                break;
            }
            tuple[i] = 1;
        }
    }
}

/// Applies the first-match transformation given by `formulas` (with `var`
/// ranging over positions) and tests the resulting Δ-word against `language`.
pub fn eval_lindstrom(
    language: &Language,
    formulas: &[Formula],
    s: &WordStructure,
    alpha: &Assignment,
    var: &str,
    registry: &Registry,
) -> Result<bool, EvalError> {
    check_lindstrom_arity("<given>", language, formulas.len())?;
    let mut names: Vec<String> = alpha.keys().filter(|k| *k != var).cloned().collect();
    let values: Vec<u32> = names.iter().map(|k| alpha[k]).collect();
    if let Some((k, &v)) = alpha.iter().find(|(k, &v)| *k != var && (v == 0 || v as usize > s.len())) {
        return Err(EvalError::OutOfRange { var: k.clone(), value: v, m: s.len() });
    }
    names.push(var.to_string());
    let compiled: Vec<Compiled> = formulas
        .iter()
        .map(|f| Compiled::new(f, registry, Some(&s.alphabet), &names))
        .collect::<Result<_, _>>()?;
    let t = formulas.len();
    let mut vals = values;
    vals.push(0);
    let word: Vec<Sym> = (1..=s.len() as u32)
        .map(|c| {
            *vals.last_mut().unwrap() = c;
            compiled.iter().position(|f| f.holds(Some(&s.word), s.len(), &vals)).unwrap_or(t)
        })
        .collect();
    Ok(language.contains(&word))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn reg() -> Registry {
        Registry::standard()
    }

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn holds(text: &str, word: &str) -> bool {
        let r = reg();
        let f = parse_formula(text, &r).unwrap();
        eval(&f, &WordStructure::parse(&ab(), word).unwrap(), &Assignment::new(), &r).unwrap()
    }

    #[test]
    fn even_b_examples() {
        assert!(!holds("!exists i.(even(i) & Qb(i))", "abab"));
        assert!(holds("!exists i.(even(i) & Qb(i))", "ba"));
        assert!(holds("forall x. x = x", "abba"));
        assert!(holds("maj x. true", "aba"));
    }

    #[test]
    fn empty_universe() {
        assert!(!holds("exists x. true", ""));
        assert!(holds("forall x. false", ""));
        assert!(holds("existsmod[3,0] x. true", ""));
        assert!(!holds("existsmod[3,1] x. true", ""));
        assert!(!holds("maj x. true", ""));
    }

    #[test]
    fn majority_is_strict() {
        assert!(!holds("maj x. Qa(x)", "abab"));
        assert!(holds("maj x. Qa(x)", "abaa"));
    }

    #[test]
    fn languages() {
        let r = reg();
        let words = |t: &str, k| language_of(&parse_formula(t, &r).unwrap(), &ab(), k, &r).unwrap();
        assert!(words("false", 3).is_empty());
        let all_a: BTreeSet<Vec<Sym>> = [vec![], vec![0], vec![0, 0]].into();
        assert_eq!(words("forall x. Qa(x)", 2), all_a);
        let no_even_b: BTreeSet<Vec<Sym>> = [vec![], vec![0], vec![1], vec![0, 0], vec![1, 0]].into();
        assert_eq!(words("!exists i.(even(i) & Qb(i))", 2), no_even_b);
    }

    #[test]
    fn relations() {
        let r = reg();
        let rel = |t: &str, vars: &[&str], bound| {
            let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
            relation_of(&parse_formula(t, &r).unwrap(), &vars, bound, DEFAULT_WINDOW, &r)
        };
        let plus = rel("plus(x,y,z)", &["x", "y", "z"], 4).unwrap();
        let expect: BTreeSet<Vec<u32>> =
            [[1, 1, 2], [1, 2, 3], [2, 1, 3], [1, 3, 4], [3, 1, 4], [2, 2, 4]].iter().map(|t| t.to_vec()).collect();
        assert_eq!(plus.tuples, expect);
        assert_eq!(rel("x = x", &["x"], 3).unwrap().len(), 3);
        assert!(rel("x < y & y < x", &["x", "y"], 5).unwrap().is_empty());
        assert!(matches!(rel("Qa(x)", &["x"], 3), Err(EvalError::LetterInRelation(_))));
        assert!(matches!(rel("x < y", &["x"], 3), Err(EvalError::FreeVars { .. })));
    }

    #[test]
    fn solver_matches_enumeration() {
        let r = reg();
        let with = parse_formula("exists s. plus(x, y, s) & s < z", &r).unwrap();
        let without = parse_formula("exists s. s < z & (plus(x, y, s) | false)", &r).unwrap();
        let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(
            relation_of(&with, &vars, 7, 4, &r).unwrap(),
            relation_of(&without, &vars, 7, 4, &r).unwrap()
        );
    }

    #[test]
    fn lindstrom_basics() {
        let r = reg();
        let astar = Language::new(ab(), |w| w.iter().all(|&s| s == 0));
        let aplus = Language::new(ab(), |w| !w.is_empty() && w.iter().all(|&s| s == 0));
        let s3 = WordStructure::parse(&ab(), "bab").unwrap();
        let none = Assignment::new();
        assert!(eval_lindstrom(&astar, &[Formula::True], &s3, &none, "y", &r).unwrap());
        let s2 = WordStructure::parse(&ab(), "ab").unwrap();
        assert!(!eval_lindstrom(&aplus, &[Formula::False], &s2, &none, "y", &r).unwrap());
        assert!(eval_lindstrom(&aplus, &[], &s2, &none, "y", &r).is_err());
    }

    #[test]
    fn unassigned_and_out_of_range() {
        let r = reg();
        let f = parse_formula("x < y", &r).unwrap();
        let s = WordStructure::parse(&ab(), "ab").unwrap();
        let mut alpha = Assignment::new();
        alpha.insert("x".into(), 1);
        assert_eq!(eval(&f, &s, &alpha, &r), Err(EvalError::Unassigned("y".into())));
        alpha.insert("y".into(), 3);
        assert!(matches!(eval(&f, &s, &alpha, &r), Err(EvalError::OutOfRange { .. })));
        alpha.insert("y".into(), 2);
        assert_eq!(eval(&f, &s, &alpha, &r), Ok(true));
    }
}
