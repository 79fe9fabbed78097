use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Alphabet, AutomatonError, StateId, StateSet, Sym};

/// Nondeterministic finite automaton with epsilon moves.
#[derive(Clone, Debug)]
pub struct Nfa {
    alphabet: Alphabet,
    state_names: Vec<String>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    // delta[q][a] -> targets
    delta: Vec<Vec<Vec<StateId>>>,
    eps: Vec<Vec<StateId>>,
    closure: Vec<StateSet>,
}

/// Incremental construction of an [`Nfa`].
#[derive(Clone, Debug)]
pub struct NfaBuilder {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<(StateId, Option<Sym>, StateId)>,
}

impl NfaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        NfaBuilder {
            alphabet,
            names: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn add_state(&mut self) -> StateId {
        let q = self.names.len();
        self.names.push(format!("q{q}"));
        self.accepting.push(false);
        q
    }

    pub fn add_named_state(&mut self, name: impl Into<String>) -> StateId {
        let q = self.add_state();
        self.names[q] = name.into();
        q
    }

    pub fn set_initial(&mut self, q: StateId) {
        if !self.initial.contains(&q) {
            self.initial.push(q);
        }
    }

    pub fn set_accepting(&mut self, q: StateId, yes: bool) {
        self.accepting[q] = yes;
    }

    pub fn add_transition(&mut self, from: StateId, sym: Sym, to: StateId) {
        self.edges.push((from, Some(sym), to));
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        self.edges.push((from, None, to));
    }

    /// Transition on every symbol of the alphabet.
    pub fn add_any(&mut self, from: StateId, to: StateId) {
        for a in 0..self.alphabet.len() {
            self.add_transition(from, a, to);
        }
    }

    pub fn build(self) -> Nfa {
        let n = self.names.len();
        let k = self.alphabet.len();
        let mut delta = vec![vec![Vec::new(); k]; n];
        let mut eps = vec![Vec::new(); n];
        for (from, sym, to) in self.edges {
            let list = match sym {
                Some(a) => &mut delta[from][a],
                None => &mut eps[from],
            };
            if !list.contains(&to) {
                list.push(to);
            }
        }
        let mut initial = self.initial;
        initial.sort_unstable();
        let mut nfa = Nfa {
            alphabet: self.alphabet,
            state_names: self.names,
            initial,
            accepting: self.accepting,
            delta,
            eps,
            closure: Vec::new(),
        };
        nfa.closure = (0..n).map(|q| nfa.compute_closure(q)).collect();
        nfa
    }
}

impl Nfa {
    /// Thompson construction from a small regular-expression syntax over a
    /// single-character alphabet: literals, `.` (any symbol), `[..]`, `( )`,
    /// `|`, `*`, `+`, `?`.
    pub fn from_regex(alphabet: &Alphabet, pattern: &str) -> Result<Nfa, AutomatonError> {
        super::regex::compile(alphabet, pattern)
    }

    /// The automaton accepting nothing.
    pub fn empty(alphabet: &Alphabet) -> Nfa {
        let mut b = NfaBuilder::new(alphabet.clone());
        let q = b.add_state();
        b.set_initial(q);
        b.build()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    /// All transitions as `(from, symbol-or-epsilon, to)`, in a stable order.
    pub fn transitions(&self) -> Vec<(StateId, Option<Sym>, StateId)> {
        let mut out = Vec::new();
        for q in 0..self.num_states() {
            for &t in &self.eps[q] {
                out.push((q, None, t));
            }
            for (a, targets) in self.delta[q].iter().enumerate() {
                for &t in targets {
                    out.push((q, Some(a), t));
                }
            }
        }
        out
    }

    fn compute_closure(&self, q: StateId) -> StateSet {
        let mut set = StateSet::new(self.num_states());
        let mut stack = vec![q];
        set.insert(q);
        while let Some(p) = stack.pop() {
            for &t in &self.eps[p] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
        set
    }

    fn start_set(&self) -> StateSet {
        let mut s = StateSet::new(self.num_states());
        for &q in &self.initial {
            s.union_with(&self.closure[q]);
        }
        s
    }

    fn step(&self, from: &StateSet, a: Sym, into: &mut StateSet) {
        into.clear();
        for q in from.iter() {
            for &t in &self.delta[q][a] {
                into.union_with(&self.closure[t]);
            }
        }
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        let mut cur = self.start_set();
        let mut next = StateSet::new(self.num_states());
        for &a in word {
            if a >= self.alphabet.len() {
                return false;
            }
            self.step(&cur, a, &mut next);
            std::mem::swap(&mut cur, &mut next);
            if cur.is_empty() {
                return false;
            }
        }
        let accepted = cur.iter().any(|q| self.accepting[q]);
        accepted
    }

    pub fn accepts_str(&self, text: &str) -> Result<bool, AutomatonError> {
        Ok(self.accepts(&self.alphabet.parse_word(text)?))
    }

    /// Deterministic means: one initial state, no epsilon moves, at most one
    /// successor per symbol.
    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1
            && self.eps.iter().all(Vec::is_empty)
            && self.delta.iter().all(|row| row.iter().all(|t| t.len() <= 1))
    }

    /// Subset construction. The result is complete.
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut ids: HashMap<StateSet, StateId> = HashMap::new();
        let mut sets = Vec::new();
        let mut queue = VecDeque::new();
        let start = self.start_set();
        ids.insert(start.clone(), 0);
        sets.push(start.clone());
        queue.push_back(start);
        let mut table = Vec::new();
        let mut next = StateSet::new(self.num_states());
        while let Some(set) = queue.pop_front() {
            for a in 0..k {
                self.step(&set, a, &mut next);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        ids.insert(next.clone(), id);
                        sets.push(next.clone());
                        queue.push_back(next.clone());
                        id
                    }
                };
                table.push(id);
            }
        }
        let accepting = sets
            .iter()
            .map(|s| s.iter().any(|q| self.accepting[q]))
            .collect();
        Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, table }
    }

    /// Read a deterministic automaton as a DFA, completing it with a sink.
    pub fn to_dfa(&self) -> Result<Dfa, AutomatonError> {
        if !self.is_deterministic() {
            return Err(AutomatonError::NotDeterministic(
                "determinize before complementing".into(),
            ));
        }
        let k = self.alphabet.len();
        let n = self.num_states();
        // a sink state only when some transition is missing
        let complete = (0..n).all(|q| (0..k).all(|a| !self.delta[q][a].is_empty()));
        let sink = n;
        let mut table = vec![sink; (n + usize::from(!complete)) * k];
        for q in 0..n {
            for a in 0..k {
                if let Some(&t) = self.delta[q][a].first() {
                    table[q * k + a] = t;
                }
            }
        }
        let mut accepting = self.accepting.clone();
        if !complete {
            accepting.push(false);
        }
        Ok(Dfa { alphabet: self.alphabet.clone(), initial: self.initial[0], accepting, table })
    }

    /// Complement of a deterministic automaton.
    pub fn complement(&self) -> Result<Dfa, AutomatonError> {
        Ok(self.to_dfa()?.complement())
    }

    /// Boolean combination; both operands are determinized first.
    pub fn product(&self, other: &Nfa, op: BoolOp) -> Result<Nfa, AutomatonError> {
        Ok(self.determinize().product(&other.determinize(), op)?.to_nfa())
    }

    /// Accepted words of length at most `max_len`.
    pub fn enumerate(&self, max_len: usize) -> BTreeSet<Vec<Sym>> {
        let mut out = BTreeSet::new();
        let mut frontier = vec![(Vec::new(), self.start_set())];
        for len in 0..=max_len {
            let mut next_frontier = Vec::new();
            for (word, set) in frontier {
                if set.iter().any(|q| self.accepting[q]) {
                    out.insert(word.clone());
                }
                if len == max_len {
                    continue;
                }
                for a in 0..self.alphabet.len() {
                    let mut next = StateSet::new(self.num_states());
                    self.step(&set, a, &mut next);
                    if !next.is_empty() {
                        let mut w = word.clone();
                        w.push(a);
                        next_frontier.push((w, next));
                    }
                }
            }
            frontier = next_frontier;
        }
        out
    }
}

/// Binary Boolean operations for products.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
    Minus,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::Minus => a && !b,
        }
    }
}

/// Complete deterministic finite automaton.
#[derive(Clone, Debug)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: StateId,
    accepting: Vec<bool>,
    table: Vec<StateId>,
}

impl Dfa {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial_state(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn next(&self, q: StateId, a: Sym) -> StateId {
        self.table[q * self.alphabet.len() + a]
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        let mut q = self.initial;
        for &a in word {
            if a >= self.alphabet.len() {
                return false;
            }
            q = self.next(q, a);
        }
        self.accepting[q]
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.accepting.iter_mut().for_each(|b| *b = !*b);
        d
    }

    pub fn product(&self, other: &Dfa, op: BoolOp) -> Result<Dfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut ids = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert((self.initial, other.initial), 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let succ = (self.next(p, a), other.next(q, a));
                let id = *ids.entry(succ).or_insert_with(|| {
                    pairs.push(succ);
                    pairs.len() - 1
                });
                table.push(id);
            }
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| op.apply(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), initial: 0, accepting, table })
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut b = NfaBuilder::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            let s = b.add_state();
            b.set_accepting(s, self.accepting[q]);
        }
        b.set_initial(self.initial);
        for q in 0..self.num_states() {
            for a in 0..self.alphabet.len() {
                b.add_transition(q, a, self.next(q, a));
            }
        }
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::words_up_to;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn words(a: &Alphabet, ws: &[&str]) -> BTreeSet<Vec<Sym>> {
        ws.iter().map(|w| a.parse_word(w).unwrap()).collect()
    }

    #[test]
    fn a_star_accepts_aaa() {
        let a = ab();
        let n = Nfa::from_regex(&a, "a*").unwrap();
        assert!(n.accepts_str("aaa").unwrap());
        assert!(n.accepts_str("").unwrap());
        assert!(!n.accepts_str("ab").unwrap());
    }

    #[test]
    fn product_with_empty_is_empty() {
        let a = ab();
        let star = Nfa::from_regex(&a, "a*").unwrap();
        let p = star.product(&Nfa::empty(&a), BoolOp::And).unwrap();
        assert!(p.enumerate(5).is_empty());
    }

    #[test]
    fn enumerate_a_star_b() {
        let a = ab();
        let n = Nfa::from_regex(&a, "a*b").unwrap();
        assert_eq!(n.enumerate(2), words(&a, &["b", "ab"]));
    }

    #[test]
    fn complement_requires_determinism() {
        let a = ab();
        let n = Nfa::from_regex(&a, "a*b").unwrap();
        assert!(matches!(n.complement(), Err(AutomatonError::NotDeterministic(_))));
        let c = n.determinize().complement();
        for w in words_up_to(2, 8) {
            assert_eq!(c.accepts(&w), !n.accepts(&w));
        }
    }

    #[test]
    fn incomplete_dfa_is_completed() {
        let a = ab();
        let mut b = NfaBuilder::new(a.clone());
        let q0 = b.add_state();
        let q1 = b.add_state();
        b.set_initial(q0);
        b.set_accepting(q1, true);
        b.add_transition(q0, 0, q1);
        let n = b.build();
        let c = n.complement().unwrap();
        assert!(!c.accepts(&[0]));
        assert!(c.accepts(&[1]));
        assert!(c.accepts(&[0, 0]));
    }

    #[test]
    fn products_match_pointwise_ops() {
        let a = ab();
        let x = Nfa::from_regex(&a, "(a|b)*a").unwrap();
        let y = Nfa::from_regex(&a, "a(a|b)*").unwrap();
        for op in [BoolOp::And, BoolOp::Or, BoolOp::Minus] {
            let p = x.product(&y, op).unwrap();
            for w in words_up_to(2, 7) {
                assert_eq!(p.accepts(&w), op.apply(x.accepts(&w), y.accepts(&w)), "{op:?} {w:?}");
            }
        }
    }
}
