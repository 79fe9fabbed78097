use std::collections::HashMap;

use super::{Alphabet, AutomatonError, StateId, Sym};

/// One move: in state `from`, reading `input` (or nothing), with `top` on the
/// stack, pop `top`, push `push` (first element ends up on top), go to `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaRule {
    pub from: StateId,
    pub input: Option<Sym>,
    pub top: Sym,
    pub to: StateId,
    pub push: Vec<Sym>,
}

#[derive(Clone, Debug)]
struct PdaCore {
    state_names: Vec<String>,
    input: Alphabet,
    stack: Alphabet,
    bottom: Sym,
    initial: StateId,
    accepting: Vec<bool>,
    rules: Vec<PdaRule>,
    // (state, top) -> rule indices
    by_top: HashMap<(StateId, Sym), Vec<usize>>,
}

impl PdaCore {
    fn num_states(&self) -> usize {
        self.state_names.len()
    }

    fn rules_at(&self, q: StateId, top: Sym) -> &[usize] {
        self.by_top.get(&(q, top)).map_or(&[], Vec::as_slice)
    }
}

/// Builds pushdown automata from state and symbol names.
#[derive(Clone, Debug)]
pub struct PdaBuilder {
    core: PdaCore,
    names: HashMap<String, StateId>,
    initial_set: bool,
}

impl PdaBuilder {
    pub fn new(input: Alphabet, stack: Alphabet, bottom: &str) -> Result<Self, AutomatonError> {
        let bottom = stack
            .index_of(bottom)
            .ok_or_else(|| AutomatonError::UnknownSymbol(bottom.to_string()))?;
        Ok(PdaBuilder {
            core: PdaCore {
                state_names: Vec::new(),
                input,
                stack,
                bottom,
                initial: 0,
                accepting: Vec::new(),
                rules: Vec::new(),
                by_top: HashMap::new(),
            },
            names: HashMap::new(),
            initial_set: false,
        })
    }

    /// Id of the named state, declaring it on first use.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.names.get(name) {
            return q;
        }
        let q = self.core.state_names.len();
        self.core.state_names.push(name.to_string());
        self.core.accepting.push(false);
        self.names.insert(name.to_string(), q);
        q
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.core.initial = self.state(name);
        self.initial_set = true;
        self
    }

    pub fn accepting(&mut self, name: &str) -> &mut Self {
        let q = self.state(name);
        self.core.accepting[q] = true;
        self
    }

    /// Adds a rule by names. `input` of `None` is an epsilon move.
    pub fn rule(
        &mut self,
        from: &str,
        input: Option<&str>,
        top: &str,
        to: &str,
        push: &[&str],
    ) -> Result<&mut Self, AutomatonError> {
        let input = match input {
            Some(a) => Some(
                self.core
                    .input
                    .index_of(a)
                    .ok_or_else(|| AutomatonError::UnknownSymbol(a.to_string()))?,
            ),
            None => None,
        };
        let stack_sym = |s: &str| {
            self.core
                .stack
                .index_of(s)
                .ok_or_else(|| AutomatonError::UnknownSymbol(s.to_string()))
        };
        let top = stack_sym(top)?;
        let push = push.iter().map(|s| stack_sym(s)).collect::<Result<Vec<_>, _>>()?;
        let from = self.state(from);
        let to = self.state(to);
        self.add_rule(PdaRule { from, input, top, to, push })
    }

    pub fn add_rule(&mut self, rule: PdaRule) -> Result<&mut Self, AutomatonError> {
        if rule.push.len() > 2 {
            return Err(AutomatonError::PushTooLong(rule.push.len()));
        }
        let n = self.core.num_states();
        if rule.from >= n || rule.to >= n {
            return Err(AutomatonError::UnknownState(format!("{}", rule.from.max(rule.to))));
        }
        let bottom = self.core.bottom;
        let keeps_bottom = if rule.top == bottom {
            rule.push.last() == Some(&bottom) && rule.push[..rule.push.len() - 1].iter().all(|&s| s != bottom)
        } else {
            !rule.push.contains(&bottom)
        };
        if !keeps_bottom {
            return Err(AutomatonError::InvalidRule(format!(
                "rule from {} must keep the bottom marker at the bottom",
                self.core.state_names[rule.from]
            )));
        }
        let idx = self.core.rules.len();
        self.core.by_top.entry((rule.from, rule.top)).or_default().push(idx);
        self.core.rules.push(rule);
        Ok(self)
    }

    fn finish(self) -> Result<PdaCore, AutomatonError> {
        if !self.initial_set {
            return Err(AutomatonError::UnknownState("no initial state".into()));
        }
        Ok(self.core)
    }

    pub fn build_npda(self) -> Result<Npda, AutomatonError> {
        Ok(Npda { core: self.finish()? })
    }

    pub fn build_dpda(self) -> Result<Dpda, AutomatonError> {
        let core = self.finish()?;
        for (&(q, top), idxs) in &core.by_top {
            let rules: Vec<&PdaRule> = idxs.iter().map(|&i| &core.rules[i]).collect();
            let eps = rules.iter().filter(|r| r.input.is_none()).count();
            let clash = if eps > 0 {
                rules.len() > 1
            } else {
                let mut seen = vec![false; core.input.len()];
                rules.iter().any(|r| std::mem::replace(&mut seen[r.input.unwrap()], true))
            };
            if clash {
                return Err(AutomatonError::NotDeterministic(format!(
                    "state {} with top {}",
                    core.state_names[q],
                    core.stack.name(top)
                )));
            }
        }
        Ok(Dpda { core })
    }
}

macro_rules! shared_accessors {
    ($t:ty) => {
        impl $t {
            pub fn input_alphabet(&self) -> &Alphabet {
                &self.core.input
            }

            pub fn stack_alphabet(&self) -> &Alphabet {
                &self.core.stack
            }

            pub fn bottom(&self) -> Sym {
                self.core.bottom
            }

            pub fn num_states(&self) -> usize {
                self.core.num_states()
            }

            pub fn state_names(&self) -> &[String] {
                &self.core.state_names
            }

            pub fn initial_state(&self) -> StateId {
                self.core.initial
            }

            pub fn is_accepting(&self, q: StateId) -> bool {
                self.core.accepting[q]
            }

            pub fn rules(&self) -> &[PdaRule] {
                &self.core.rules
            }

            pub fn accepts_str(&self, text: &str) -> Result<bool, AutomatonError> {
                self.accepts(&self.core.input.parse_word(text)?)
            }
        }
    };
}

/// Deterministic pushdown automaton, accepting by final state.
#[derive(Clone, Debug)]
pub struct Dpda {
    core: PdaCore,
}

shared_accessors!(Dpda);

impl Dpda {
    /// Runs the automaton. Returns `Ok(false)` when the machine blocks and an
    /// error when an epsilon loop is detected.
    pub fn run(&self, word: &[Sym]) -> Result<bool, AutomatonError> {
        let core = &self.core;
        let mut state = core.initial;
        let mut stack = vec![core.bottom];
        for (pos, &a) in word.iter().enumerate() {
            if a >= core.input.len() {
                return Ok(false);
            }
            if self.epsilon_phase(&mut state, &mut stack, pos, false)?.is_none() {
                return Ok(false);
            }
            let Some(&top) = stack.last() else { return Ok(false) };
            let rule = core
                .rules_at(state, top)
                .iter()
                .map(|&i| &core.rules[i])
                .find(|r| r.input == Some(a));
            match rule {
                Some(r) => apply(r, &mut state, &mut stack),
                None => return Ok(false),
            }
        }
        Ok(self.epsilon_phase(&mut state, &mut stack, word.len(), true)? == Some(true))
    }

    pub fn accepts(&self, word: &[Sym]) -> Result<bool, AutomatonError> {
        self.run(word)
    }

    /// Follows epsilon moves. With `watch`, reports whether an accepting state
    /// was visited on the way. `None` means the stack emptied.
    fn epsilon_phase(
        &self,
        state: &mut StateId,
        stack: &mut Vec<Sym>,
        position: usize,
        watch: bool,
    ) -> Result<Option<bool>, AutomatonError> {
        let core = &self.core;
        let cap = stack.len() + core.num_states();
        let mut seen_accepting = watch && core.accepting[*state];
        let mut steps = 0;
        loop {
            let Some(&top) = stack.last() else { return Ok(None) };
            let rule = core
                .rules_at(*state, top)
                .iter()
                .map(|&i| &core.rules[i])
                .find(|r| r.input.is_none());
            let Some(r) = rule else { return Ok(Some(seen_accepting)) };
            steps += 1;
            if steps > cap {
                return Err(AutomatonError::EpsilonLoop { position, steps });
            }
            apply(r, state, stack);
            seen_accepting |= watch && core.accepting[*state];
        }
    }
}

fn apply(r: &PdaRule, state: &mut StateId, stack: &mut Vec<Sym>) {
    stack.pop();
    stack.extend(r.push.iter().rev());
    *state = r.to;
}

/// Nondeterministic pushdown automaton, accepting by final state.
#[derive(Clone, Debug)]
pub struct Npda {
    core: PdaCore,
}

shared_accessors!(Npda);

impl From<Dpda> for Npda {
    fn from(d: Dpda) -> Self {
        Npda { core: d.core }
    }
}

/// Stacks shared as a trie: each node is a stack, identified by its id.
struct StackPool {
    sym: Vec<Sym>,
    parent: Vec<u32>,
    height: Vec<u32>,
    children: HashMap<(u32, Sym), u32>,
}

const EMPTY: u32 = 0;

impl StackPool {
    fn new() -> Self {
        StackPool { sym: vec![0], parent: vec![0], height: vec![0], children: HashMap::new() }
    }

    fn push(&mut self, under: u32, s: Sym) -> u32 {
        if let Some(&id) = self.children.get(&(under, s)) {
            return id;
        }
        let id = self.sym.len() as u32;
        self.sym.push(s);
        self.parent.push(under);
        self.height.push(self.height[under as usize] + 1);
        self.children.insert((under, s), id);
        id
    }

    fn top(&self, id: u32) -> Option<Sym> {
        (id != EMPTY).then(|| self.sym[id as usize])
    }
}

impl Npda {
    /// Breadth-first search over configurations. The stack height is capped at
    /// `|w| + |Q| + 2`; exceeding it is an error.
    pub fn accepts(&self, word: &[Sym]) -> Result<bool, AutomatonError> {
        let core = &self.core;
        if word.iter().any(|&a| a >= core.input.len()) {
            return Ok(false);
        }
        let cap = (word.len() + core.num_states() + 2) as u32;
        let mut pool = StackPool::new();
        let start = pool.push(EMPTY, core.bottom);
        let mut seen: std::collections::HashSet<(StateId, u32)> = Default::default();
        let mut current = vec![(core.initial, start)];
        for pos in 0..=word.len() {
            seen.clear();
            current.retain(|c| seen.insert(*c));
            // epsilon closure, extending `current` in place
            let mut i = 0;
            while i < current.len() {
                let (q, st) = current[i];
                i += 1;
                let Some(top) = pool.top(st) else { continue };
                for &ri in core.rules_at(q, top) {
                    let r = &core.rules[ri];
                    if r.input.is_some() {
                        continue;
                    }
                    let next = Self::push_rule(&mut pool, st, r, cap, pos)?;
                    if seen.insert((r.to, next)) {
                        current.push((r.to, next));
                    }
                }
            }
            if pos == word.len() {
                return Ok(current.iter().any(|&(q, _)| core.accepting[q]));
            }
            let a = word[pos];
            let mut next_set = Vec::new();
            for &(q, st) in &current {
                let Some(top) = pool.top(st) else { continue };
                for &ri in core.rules_at(q, top) {
                    let r = &core.rules[ri];
                    if r.input == Some(a) {
                        let next = Self::push_rule(&mut pool, st, r, cap, pos)?;
                        next_set.push((r.to, next));
                    }
                }
            }
            if next_set.is_empty() {
                return Ok(false);
            }
            current = next_set;
        }
        unreachable!()
    }

    fn push_rule(
        pool: &mut StackPool,
        st: u32,
        r: &PdaRule,
        cap: u32,
        position: usize,
    ) -> Result<u32, AutomatonError> {
        let mut id = pool.parent[st as usize];
        for &s in r.push.iter().rev() {
            id = pool.push(id, s);
        }
        if pool.height[id as usize] > cap {
            return Err(AutomatonError::StackCapExceeded { position, cap: cap as usize });
        }
        Ok(id)
    }
}
