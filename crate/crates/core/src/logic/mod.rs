//! First-order logic over words with generalized quantifiers.
//!
//! Formulas talk about positions `1..=m` of a word. Letter atoms `Qa(x)` test
//! the symbol at a position, numerical atoms `plus(x,y,z)` consult a
//! [`Registry`], and besides `exists`/`forall` there are modular counting,
//! majority and unary Lindström quantifiers.

mod eval;
mod parse;
mod print;
mod registry;
mod transform;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::automata::{Alphabet, Sym};

pub use eval::{eval, eval_letterless, eval_lindstrom, language_of, relation_of, Compiled, DEFAULT_WINDOW};
pub use parse::parse_formula;
pub use registry::{Language, Predicate, Registry};
pub use transform::{build_chi, build_chi_weak, rename_bound, rewrite_letter_to_equalities};

/// Values of free variables. Positions are 1-based.
pub type Assignment = BTreeMap<String, u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    /// `Qa(x)`: position x carries symbol a.
    Letter { symbol: String, var: String },
    /// Registered numerical predicate, e.g. `plus(x,y,z)` or `modq[3,1](x)`.
    Num { name: String, params: Vec<u64>, args: Vec<String> },
    Less(String, String),
    Equal(String, String),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// Number of witnesses is congruent to r modulo q.
    ModExists { q: u32, r: u32, var: String, body: Box<Formula> },
    /// Strictly more than half of the positions are witnesses.
    Majority(String, Box<Formula>),
    /// Unary Lindström quantifier over a registered language with |Δ|-1 bodies.
    Lindstrom { language: String, var: String, bodies: Vec<Formula> },
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Equal(a.to_string(), b.to_string())
    }

    pub fn less(a: &str, b: &str) -> Formula {
        Formula::Less(a.to_string(), b.to_string())
    }

    pub fn letter(symbol: &str, var: &str) -> Formula {
        Formula::Letter { symbol: symbol.to_string(), var: var.to_string() }
    }

    pub fn num(name: &str, args: &[&str]) -> Formula {
        Formula::Num { name: name.to_string(), params: Vec::new(), args: args.iter().map(|s| s.to_string()).collect() }
    }

    /// Conjunction; a single conjunct is returned as is, none gives `true`.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction; a single disjunct is returned as is, none gives `false`.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Letter { var, .. } => see(var, bound),
            Formula::Num { args, .. } => args.iter().for_each(|a| see(a, bound)),
            Formula::Less(a, b) | Formula::Equal(a, b) => {
                see(a, bound);
                see(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, body)
            | Formula::Forall(v, body)
            | Formula::Majority(v, body)
            | Formula::ModExists { var: v, body, .. } => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Lindstrom { var, bodies, .. } => {
                bound.push(var.clone());
                bodies.iter().for_each(|f| f.collect_free(bound, out));
                bound.pop();
            }
        }
    }

    /// Whether any letter atom occurs.
    pub fn has_letters(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Letter { .. }));
        found
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Exists(_, g) | Formula::Forall(_, g) | Formula::Majority(_, g) => g.visit(f),
            Formula::ModExists { body, .. } => body.visit(f),
            Formula::Lindstrom { bodies, .. } => bodies.iter().for_each(|g| g.visit(f)),
            _ => {}
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// A word read as a logical structure on positions `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStructure {
    pub alphabet: Alphabet,
    pub word: Vec<Sym>,
}

impl WordStructure {
    pub fn new(alphabet: Alphabet, word: Vec<Sym>) -> Self {
        assert!(word.iter().all(|&s| s < alphabet.len()), "symbol outside the alphabet");
        WordStructure { alphabet, word }
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self, crate::automata::AutomatonError> {
        Ok(WordStructure { alphabet: alphabet.clone(), word: alphabet.parse_word(text)? })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("predicate {name} takes {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
    #[error("language {name} needs {expected} formulas, got {got}")]
    LindstromArity { name: String, expected: usize, got: usize },
    #[error("existsmod[{q},{r}] needs 0 <= r < q")]
    BadModulus { q: u32, r: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable {0} is not assigned")]
    Unassigned(String),
    #[error("variable {var} = {value} lies outside 1..={m}")]
    OutOfRange { var: String, value: u32, m: usize },
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(String),
    #[error("letter atom {0:?} in a letter-free evaluation")]
    LetterInRelation(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("free variables {found:?} differ from the requested {expected:?}")]
    FreeVars { expected: Vec<String>, found: Vec<String> },
    #[error("letter {0:?} is not a Γ_n symbol")]
    NotGamma(String),
}
