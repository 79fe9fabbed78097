//! Finite automata, pushdown automata and transducers.
//!
//! Every machine works over an [`Alphabet`] of named symbols; words are slices of
//! symbol indices into that alphabet. Names are what the text format and the CLI
//! see, indices are what the simulators see.

mod format;
mod nfa;
mod pda;
mod regex;
mod transducer;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use format::Machine;
pub use nfa::{BoolOp, Dfa, Nfa, NfaBuilder};
pub use pda::{Dpda, Npda, PdaBuilder, PdaRule};
pub use transducer::{Transducer, TransducerBuilder, TransducerRule};

/// Index of a symbol inside an [`Alphabet`].
pub type Sym = usize;

/// Index of a state inside a machine.
pub type StateId = usize;

/// Reserved token for the empty word in the text format.
pub const EPSILON_TOKEN: &str = "_";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("invalid symbol name {0:?}")]
    InvalidSymbol(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("state {0} is not declared")]
    UnknownState(String),
    #[error("machine is not deterministic: {0}")]
    NotDeterministic(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("epsilon loop: {steps} epsilon moves at input position {position} without consuming input")]
    EpsilonLoop { position: usize, steps: usize },
    #[error("stack height cap {cap} exceeded at input position {position}")]
    StackCapExceeded { position: usize, cap: usize },
    #[error("transition pushes {0} symbols; at most 2 are supported")]
    PushTooLong(usize),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("transducer produced more than one output for the same input")]
    AmbiguousOutput,
    #[error("regex error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// An ordered set of named symbols.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Sym>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for s in symbols {
            let s = s.into();
            if s.is_empty()
                || s == EPSILON_TOKEN
                || s == "->"
                || s == "/"
                || s.chars().any(char::is_whitespace)
            {
                return Err(AutomatonError::InvalidSymbol(s));
            }
            if index.insert(s.clone(), names.len()).is_some() {
                return Err(AutomatonError::DuplicateSymbol(s));
            }
            names.push(s);
        }
        Ok(Alphabet { symbols: names, index })
    }

    /// One symbol per character of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self, AutomatonError> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.symbols[sym]
    }

    fn single_chars(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parse a word. Alphabets whose symbols are all single characters accept
    /// unseparated text (`"aab"`); otherwise tokens are whitespace separated.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>, AutomatonError> {
        let lookup = |tok: &str| {
            self.index_of(tok)
                .ok_or_else(|| AutomatonError::UnknownSymbol(tok.to_string()))
        };
        if self.single_chars() && !text.contains(char::is_whitespace) {
            let mut buf = [0u8; 4];
            text.chars().map(|c| lookup(c.encode_utf8(&mut buf))).collect()
        } else {
            text.split_whitespace().map(lookup).collect()
        }
    }

    /// Inverse of [`Alphabet::parse_word`].
    pub fn render(&self, word: &[Sym]) -> String {
        let sep = if self.single_chars() { "" } else { " " };
        word.iter()
            .map(|&s| self.symbols[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// Dense set of states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct StateSet {
    bits: Vec<u64>,
}

impl StateSet {
    pub(crate) fn new(capacity: usize) -> Self {
        StateSet { bits: vec![0; capacity.div_ceil(64).max(1)] }
    }

    pub(crate) fn insert(&mut self, q: StateId) -> bool {
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let fresh = self.bits[w] & b == 0;
        self.bits[w] |= b;
        fresh
    }

    pub(crate) fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub(crate) fn clear(&mut self) {
        self.bits.iter_mut().for_each(|w| *w = 0);
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }
}

/// All words over an alphabet of size `k` with length at most `max_len`, in
/// shortlex order (by length, then lexicographically by symbol index).
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Vec<Sym>> {
    (0..=max_len).flat_map(move |len| words_of_len(k, len))
}

/// All words over an alphabet of size `k` of exactly length `len`, lexicographic.
pub fn words_of_len(k: usize, len: usize) -> impl Iterator<Item = Vec<Sym>> {
    let mut next = if k == 0 && len > 0 { None } else { Some(vec![0; len]) };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = len;
        while i > 0 {
            i -= 1;
            if succ[i] + 1 < k {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    })
}
