//! Unary V_n-structures over the alphabet Γ_n.
//!
//! A Γ_n symbol is a subset of {x1..xn}, stored as a bitmask (bit i-1 for x_i).
//! The empty set `.` is the padding letter. A word is a unary V_n-structure when
//! every variable occurs in exactly one position; it then encodes the tuple of
//! those positions (1-based).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automata::{Alphabet, Nfa, NfaBuilder};

/// Subset of {x1..xn} as a bitmask.
pub type Mask = u32;

/// Largest supported n. Γ_n has 2^n symbols.
pub const MAX_VARS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("invalid Γ_{n} token {token:?}")]
    InvalidToken { token: String, n: usize },
    #[error("arity {0} outside 1..={MAX_VARS}")]
    BadArity(usize),
    #[error("word is not a unary V_{0}-structure")]
    NotAStructure(usize),
    #[error("length {m} is shorter than the largest position {max}")]
    TooShort { m: usize, max: u32 },
    #[error("positions are 1-based; got 0")]
    ZeroPosition,
    #[error("{0} is not an ordered partition of the variables")]
    NotAPartition(String),
}

fn check_arity(n: usize) -> Result<(), StructureError> {
    if (1..=MAX_VARS).contains(&n) {
        Ok(())
    } else {
        Err(StructureError::BadArity(n))
    }
}

/// Full mask {x1..xn}.
pub fn all_vars(n: usize) -> Mask {
    (1 << n) - 1
}

/// Token for a Γ_n symbol: `.` or `x1+x3`.
pub fn symbol_name(mask: Mask) -> String {
    if mask == 0 {
        return ".".to_string();
    }
    (0..32)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("x{}", i + 1))
        .collect::<Vec<_>>()
        .join("+")
}

pub fn parse_symbol(token: &str, n: usize) -> Result<Mask, StructureError> {
    let bad = || StructureError::InvalidToken { token: token.to_string(), n };
    if token == "." {
        return Ok(0);
    }
    let mut mask = 0;
    let mut last = 0;
    for part in token.split('+') {
        let i: usize = part.strip_prefix('x').and_then(|d| d.parse().ok()).ok_or_else(bad)?;
        if i == 0 || i > n || i <= last || part.starts_with("x0") {
            return Err(bad());
        }
        last = i;
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// Γ_n as an [`Alphabet`]; the symbol index equals the mask.
pub fn gamma_alphabet(n: usize) -> Result<Alphabet, StructureError> {
    check_arity(n)?;
    Ok(Alphabet::new((0..1u32 << n).map(symbol_name)).expect("Γ_n names are distinct"))
}

pub fn parse_word(text: &str, n: usize) -> Result<Vec<Mask>, StructureError> {
    check_arity(n)?;
    text.split_whitespace().map(|t| parse_symbol(t, n)).collect()
}

pub fn render_word(word: &[Mask]) -> String {
    word.iter().map(|&m| symbol_name(m)).collect::<Vec<_>>().join(" ")
}

/// Each x_i occurs in exactly one position.
pub fn is_unary_structure(word: &[Mask], n: usize) -> bool {
    let full = all_vars(n);
    let mut seen: Mask = 0;
    for &m in word {
        if m & !full != 0 || m & seen != 0 {
            return false;
        }
        seen |= m;
    }
    seen == full
}

/// A validated unary V_n-structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VnStructure {
    n: usize,
    word: Vec<Mask>,
}

impl VnStructure {
    pub fn new(n: usize, word: Vec<Mask>) -> Result<Self, StructureError> {
        check_arity(n)?;
        if !is_unary_structure(&word, n) {
            return Err(StructureError::NotAStructure(n));
        }
        Ok(VnStructure { n, word })
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, StructureError> {
        Self::new(n, parse_word(text, n)?)
    }

    /// Places x_i at position `tuple[i]` and pads with `.` up to length `m`.
    pub fn encode(tuple: &[u32], m: usize) -> Result<Self, StructureError> {
        let n = tuple.len();
        check_arity(n)?;
        let max = *tuple.iter().max().unwrap();
        if tuple.contains(&0) {
            return Err(StructureError::ZeroPosition);
        }
        if (max as usize) > m {
            return Err(StructureError::TooShort { m, max });
        }
        let mut word = vec![0; m];
        for (i, &c) in tuple.iter().enumerate() {
            word[c as usize - 1] |= 1 << i;
        }
        Ok(VnStructure { n, word })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[Mask] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Longest prefix not ending in `.`.
    pub fn kernel(&self) -> VnStructure {
        let end = self.word.iter().rposition(|&m| m != 0).map_or(0, |p| p + 1);
        VnStructure { n: self.n, word: self.word[..end].to_vec() }
    }

    pub fn tuple(&self) -> Vec<u32> {
        let mut t = vec![0; self.n];
        for (p, &m) in self.word.iter().enumerate() {
            for (i, slot) in t.iter_mut().enumerate() {
                if m & (1 << i) != 0 {
                    *slot = p as u32 + 1;
                }
            }
        }
        t
    }

    /// The ordered partition (V_1..V_k): the nonempty letters in order.
    pub fn shape(&self) -> Vec<Mask> {
        self.word.iter().copied().filter(|&m| m != 0).collect()
    }
}

impl fmt::Display for VnStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_word(&self.word))
    }
}

/// Every unary V_n-structure of length exactly `m`, one per tuple in [1..m]^n.
pub fn structures_of_len(n: usize, m: usize) -> impl Iterator<Item = VnStructure> {
    let total = (m as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let tuple: Vec<u32> = (0..n)
            .map(|_| {
                let c = (code % m as u64) as u32 + 1;
                code /= m as u64;
                c
            })
            .rev()
            .collect();
        VnStructure::encode(&tuple, m).expect("positions within length")
    })
}

/// Every unary V_n-structure of length at most `max_len`.
pub fn structures_up_to(n: usize, max_len: usize) -> impl Iterator<Item = VnStructure> {
    (1..=max_len).flat_map(move |m| structures_of_len(n, m))
}

/// A finite n-ary relation over positive integers, each entry at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumRelation {
    pub arity: usize,
    pub bound: u32,
    pub tuples: BTreeSet<Vec<u32>>,
}

impl NumRelation {
    pub fn new(arity: usize, bound: u32) -> Self {
        NumRelation { arity, bound, tuples: BTreeSet::new() }
    }

    pub fn from_tuples<I: IntoIterator<Item = Vec<u32>>>(arity: usize, bound: u32, tuples: I) -> Self {
        let mut r = Self::new(arity, bound);
        for t in tuples {
            r.insert(t);
        }
        r
    }

    /// Inserts a tuple; panics on arity mismatch, zero entries or entries past the bound.
    pub fn insert(&mut self, t: Vec<u32>) {
        assert_eq!(t.len(), self.arity, "arity mismatch");
        assert!(t.iter().all(|&c| c >= 1 && c <= self.bound), "entry outside 1..={}: {t:?}", self.bound);
        self.tuples.insert(t);
    }

    pub fn contains(&self, t: &[u32]) -> bool {
        self.tuples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// Tuples of all accepted unary V_n-structures of length at most `max_len`.
pub fn relation_of_language(member: impl Fn(&[Mask]) -> bool, n: usize, max_len: usize) -> NumRelation {
    let mut rel = NumRelation::new(n, max_len as u32);
    for s in structures_up_to(n, max_len) {
        if member(s.word()) {
            rel.insert(s.tuple());
        }
    }
    rel
}

/// Whether the kernel of every member is also a member.
pub fn is_kernel_closed<'a>(language: impl IntoIterator<Item = &'a VnStructure> + Clone) -> bool {
    let set: BTreeSet<&VnStructure> = language.clone().into_iter().collect();
    set.iter().all(|w| set.contains(&w.kernel()))
}

/// Membership in the neutral-letter closure: delete every `e`, then ask `member`.
pub fn neutralize<T, F>(member: F, e: T) -> impl Fn(&[T]) -> bool
where
    T: PartialEq + Clone,
    F: Fn(&[T]) -> bool,
{
    move |w: &[T]| {
        let stripped: Vec<T> = w.iter().filter(|&c| *c != e).cloned().collect();
        member(&stripped)
    }
}

fn check_partition(n: usize, parts: &[Mask]) -> Result<(), StructureError> {
    let mut seen = 0;
    for &p in parts {
        if p == 0 || p & !all_vars(n) != 0 || p & seen != 0 {
            return Err(StructureError::NotAPartition(render_word(parts)));
        }
        seen |= p;
    }
    if seen != all_vars(n) {
        return Err(StructureError::NotAPartition(render_word(parts)));
    }
    Ok(())
}

/// NFA over Γ_n for the union over the given ordered partitions (V_1..V_k) of
/// `.* V_1 .* V_2 ... V_k .*`.
pub fn neutral_union_nfa(n: usize, partitions: &[Vec<Mask>]) -> Result<Nfa, StructureError> {
    let alphabet = gamma_alphabet(n)?;
    let mut b = NfaBuilder::new(alphabet);
    let start = b.add_state();
    b.set_initial(start);
    for parts in partitions {
        check_partition(n, parts)?;
        let mut cur = b.add_state();
        b.add_epsilon(start, cur);
        b.add_transition(cur, 0, cur);
        for &p in parts {
            let next = b.add_state();
            b.add_transition(cur, p as usize, next);
            b.add_transition(next, 0, next);
            cur = next;
        }
        b.set_accepting(cur, true);
    }
    Ok(b.build())
}

/// Least number of factors when splitting `word` into pieces of the product of
/// `(V)*` over all V in mask order, i.e. maximal runs of nondecreasing masks.
pub fn product_factors(word: &[Mask]) -> usize {
    if word.is_empty() {
        return 0;
    }
    1 + word.windows(2).filter(|p| p[1] < p[0]).count()
}
