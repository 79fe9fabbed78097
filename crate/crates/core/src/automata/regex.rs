//! Thompson construction for a tiny regex dialect over single-character symbols.

use super::{Alphabet, AutomatonError, Nfa, NfaBuilder, StateId, Sym};

enum Node {
    Empty,
    Class(Vec<Sym>),
    Concat(Vec<Node>),
    Alt(Vec<Node>),
    Star(Box<Node>),
    Plus(Box<Node>),
    Opt(Box<Node>),
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: &str) -> Result<T, AutomatonError> {
        Err(AutomatonError::Regex { offset: self.pos, message: message.to_string() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn symbol(&self, c: char) -> Result<Sym, AutomatonError> {
        match self.alphabet.index_of(c.encode_utf8(&mut [0u8; 4])) {
            Some(s) => Ok(s),
            None => self.err(&format!("{c:?} is not in the alphabet")),
        }
    }

    fn alt(&mut self) -> Result<Node, AutomatonError> {
        let mut branches = vec![self.concat()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Node::Alt(branches) })
    }

    fn concat(&mut self) -> Result<Node, AutomatonError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            let mut atom = self.atom()?;
            loop {
                match self.peek() {
                    Some('*') => atom = Node::Star(Box::new(atom)),
                    Some('+') => atom = Node::Plus(Box::new(atom)),
                    Some('?') => atom = Node::Opt(Box::new(atom)),
                    _ => break,
                }
                self.pos += 1;
            }
            parts.push(atom);
        }
        Ok(match parts.len() {
            0 => Node::Empty,
            1 => parts.pop().unwrap(),
            _ => Node::Concat(parts),
        })
    }

    fn atom(&mut self) -> Result<Node, AutomatonError> {
        let c = self.peek().unwrap();
        self.pos += 1;
        match c {
            '(' => {
                let inner = self.alt()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            '.' if self.alphabet.index_of(".").is_none() => {
                Ok(Node::Class((0..self.alphabet.len()).collect()))
            }
            '[' => {
                let mut syms = Vec::new();
                loop {
                    match self.peek() {
                        None => return self.err("unterminated class"),
                        Some(']') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => {
                            syms.push(self.symbol(c)?);
                            self.pos += 1;
                        }
                    }
                }
                Ok(Node::Class(syms))
            }
            '*' | '+' | '?' => {
                self.pos -= 1;
                self.err("dangling repetition operator")
            }
            c => {
                self.pos -= 1;
                let s = self.symbol(c)?;
                self.pos += 1;
                Ok(Node::Class(vec![s]))
            }
        }
    }
}

/// Emits a fragment and returns its (entry, exit) states.
fn emit(b: &mut NfaBuilder, node: &Node) -> (StateId, StateId) {
    let entry = b.add_state();
    let exit = b.add_state();
    match node {
        Node::Empty => b.add_epsilon(entry, exit),
        Node::Class(syms) => {
            for &s in syms {
                b.add_transition(entry, s, exit);
            }
        }
        Node::Concat(parts) => {
            let mut cur = entry;
            for p in parts {
                let (i, o) = emit(b, p);
                b.add_epsilon(cur, i);
                cur = o;
            }
            b.add_epsilon(cur, exit);
        }
        Node::Alt(branches) => {
            for br in branches {
                let (i, o) = emit(b, br);
                b.add_epsilon(entry, i);
                b.add_epsilon(o, exit);
            }
        }
        Node::Star(inner) | Node::Plus(inner) | Node::Opt(inner) => {
            let (i, o) = emit(b, inner);
            b.add_epsilon(entry, i);
            b.add_epsilon(o, exit);
            if !matches!(node, Node::Plus(_)) {
                b.add_epsilon(entry, exit);
            }
            if !matches!(node, Node::Opt(_)) {
                b.add_epsilon(o, i);
            }
        }
    }
    (entry, exit)
}

pub(super) fn compile(alphabet: &Alphabet, pattern: &str) -> Result<Nfa, AutomatonError> {
    let mut p = Parser { alphabet, chars: pattern.chars().collect(), pos: 0 };
    let node = p.alt()?;
    if p.pos != p.chars.len() {
        return p.err("unbalanced ')'");
    }
    let mut b = NfaBuilder::new(alphabet.clone());
    let (i, o) = emit(&mut b, &node);
    b.set_initial(i);
    b.set_accepting(o, true);
    Ok(b.build())
}
