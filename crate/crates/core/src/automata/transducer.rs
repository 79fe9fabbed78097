use std::collections::HashMap;

use super::{Alphabet, AutomatonError, StateId, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransducerRule {
    pub from: StateId,
    pub input: Sym,
    pub to: StateId,
    pub output: Vec<Sym>,
}

/// Finite-state transducer without epsilon-input moves. An accepting state may
/// carry a final output, emitted once the input is exhausted.
#[derive(Clone, Debug)]
pub struct Transducer {
    state_names: Vec<String>,
    input: Alphabet,
    output: Alphabet,
    initial: StateId,
    // Some(final output) for accepting states
    finals: Vec<Option<Vec<Sym>>>,
    rules: Vec<TransducerRule>,
    by_input: HashMap<(StateId, Sym), Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct TransducerBuilder {
    t: Transducer,
    names: HashMap<String, StateId>,
}

impl TransducerBuilder {
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        TransducerBuilder {
            t: Transducer {
                state_names: Vec::new(),
                input,
                output,
                initial: 0,
                finals: Vec::new(),
                rules: Vec::new(),
                by_input: HashMap::new(),
            },
            names: HashMap::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&q) = self.names.get(name) {
            return q;
        }
        let q = self.t.state_names.len();
        self.t.state_names.push(name.to_string());
        self.t.finals.push(None);
        self.names.insert(name.to_string(), q);
        q
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.t.initial = self.state(name);
        self
    }

    pub fn accepting(&mut self, name: &str, final_output: &[&str]) -> Result<&mut Self, AutomatonError> {
        let out = self.out_word(final_output)?;
        let q = self.state(name);
        self.t.finals[q] = Some(out);
        Ok(self)
    }

    fn out_word(&self, word: &[&str]) -> Result<Vec<Sym>, AutomatonError> {
        word.iter()
            .map(|s| {
                self.t
                    .output
                    .index_of(s)
                    .ok_or_else(|| AutomatonError::UnknownSymbol(s.to_string()))
            })
            .collect()
    }

    pub fn rule(&mut self, from: &str, input: &str, to: &str, output: &[&str]) -> Result<&mut Self, AutomatonError> {
        let input = self
            .t
            .input
            .index_of(input)
            .ok_or_else(|| AutomatonError::UnknownSymbol(input.to_string()))?;
        let output = self.out_word(output)?;
        let from = self.state(from);
        let to = self.state(to);
        self.add_rule(TransducerRule { from, input, to, output });
        Ok(self)
    }

    pub fn add_rule(&mut self, rule: TransducerRule) {
        let idx = self.t.rules.len();
        self.t.by_input.entry((rule.from, rule.input)).or_default().push(idx);
        self.t.rules.push(rule);
    }

    pub fn build(self) -> Transducer {
        self.t
    }
}

impl Transducer {
    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initial_state(&self) -> StateId {
        self.initial
    }

    pub fn final_output(&self, q: StateId) -> Option<&[Sym]> {
        self.finals[q].as_deref()
    }

    pub fn rules(&self) -> &[TransducerRule] {
        &self.rules
    }

    pub fn is_deterministic(&self) -> bool {
        self.by_input.values().all(|v| v.len() <= 1)
    }

    /// Output along the accepting run, `None` if there is none. Distinct
    /// outputs from different accepting runs are an error.
    pub fn transduce(&self, word: &[Sym]) -> Result<Option<Vec<Sym>>, AutomatonError> {
        let mut runs: Vec<(StateId, Vec<Sym>)> = vec![(self.initial, Vec::new())];
        for &a in word {
            let mut next = Vec::new();
            for (q, out) in &runs {
                for &ri in self.by_input.get(&(*q, a)).map_or(&[][..], Vec::as_slice) {
                    let r = &self.rules[ri];
                    let mut o = out.clone();
                    o.extend_from_slice(&r.output);
                    if !next.contains(&(r.to, o.clone())) {
                        next.push((r.to, o));
                    }
                }
            }
            if next.is_empty() {
                return Ok(None);
            }
            runs = next;
        }
        let mut result: Option<Vec<Sym>> = None;
        for (q, mut out) in runs {
            if let Some(fin) = &self.finals[q] {
                out.extend_from_slice(fin);
                match &result {
                    Some(prev) if *prev != out => return Err(AutomatonError::AmbiguousOutput),
                    _ => result = Some(out),
                }
            }
        }
        Ok(result)
    }

    /// Convenience wrapper over rendered words.
    pub fn transduce_str(&self, text: &str) -> Result<Option<String>, AutomatonError> {
        let w = self.input.parse_word(text)?;
        Ok(self.transduce(&w)?.map(|o| self.output.render(&o)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubler() -> TransducerBuilder {
        let mut b = TransducerBuilder::new(Alphabet::from_chars("ab").unwrap(), Alphabet::from_chars("xy").unwrap());
        b.initial("s");
        b.accepting("s", &["y"]).unwrap();
        b.rule("s", "a", "s", &["x", "x"]).unwrap();
        b
    }

    #[test]
    fn deterministic_run() {
        let t = doubler().build();
        assert!(t.is_deterministic());
        assert_eq!(t.transduce_str("aa").unwrap().as_deref(), Some("xxxxy"));
        assert_eq!(t.transduce_str("").unwrap().as_deref(), Some("y"));
        assert_eq!(t.transduce_str("ab").unwrap(), None);
    }

    #[test]
    fn ambiguity_detected() {
        let mut b = doubler();
        b.rule("s", "a", "s", &["y"]).unwrap();
        let t = b.build();
        assert!(!t.is_deterministic());
        assert_eq!(t.transduce_str("a"), Err(AutomatonError::AmbiguousOutput));
    }

    #[test]
    fn nondeterminism_with_one_survivor() {
        let mut b = doubler();
        b.rule("s", "a", "dead", &["y"]).unwrap();
        let t = b.build();
        assert_eq!(t.transduce_str("a").unwrap().as_deref(), Some("xxy"));
    }
}
