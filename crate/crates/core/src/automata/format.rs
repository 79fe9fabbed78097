//! Line-oriented text format for machines.
//!
//! ```text
//! machine npda
//! states p q f
//! input a b
//! stack Z X
//! bottom Z
//! initial p
//! accepting f
//! rules
//! p a Z -> p X Z
//! p _ Z -> f Z
//! ```
//!
//! `_` is the empty input. PDA rules are `from input top -> to push...` with the
//! new top first; finite automata drop the stack column; transducer rules are
//! `from input -> to / output...`, and `final q / output...` sets the output
//! emitted when the run ends in `q`. `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{
    Alphabet, AutomatonError, Dfa, Dpda, Nfa, NfaBuilder, Npda, PdaBuilder, Transducer, TransducerBuilder,
    EPSILON_TOKEN,
};

#[derive(Clone, Debug)]
pub enum Machine {
    Nfa(Nfa),
    Dfa(Dfa),
    Dpda(Dpda),
    Npda(Npda),
    Transducer(Transducer),
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, AutomatonError> {
    Err(AutomatonError::Format { line, message: message.into() })
}

struct Header {
    kind: String,
    fields: HashMap<String, (usize, Vec<String>)>,
}

impl Header {
    fn list(&self, key: &str) -> Result<&[String], AutomatonError> {
        match self.fields.get(key) {
            Some((_, v)) => Ok(v),
            None => err(0, format!("missing header line '{key}'")),
        }
    }

    fn opt_list(&self, key: &str) -> &[String] {
        self.fields.get(key).map_or(&[], |(_, v)| v)
    }

    fn alphabet(&self, key: &str) -> Result<Alphabet, AutomatonError> {
        let line = self.fields.get(key).map_or(0, |(l, _)| *l);
        Alphabet::new(self.list(key)?.iter().cloned()).or_else(|e| err(line, e.to_string()))
    }
}

fn located<T>(line: usize, r: Result<T, AutomatonError>) -> Result<T, AutomatonError> {
    r.or_else(|e| match e {
        AutomatonError::Format { .. } => Err(e),
        other => err(line, other.to_string()),
    })
}

impl Machine {
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Nfa(_) => "nfa",
            Machine::Dfa(_) => "dfa",
            Machine::Dpda(_) => "dpda",
            Machine::Npda(_) => "npda",
            Machine::Transducer(_) => "transducer",
        }
    }

    pub fn parse(text: &str) -> Result<Machine, AutomatonError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut header = Header { kind: String::new(), fields: HashMap::new() };
        for (no, line) in lines.by_ref() {
            let mut toks = line.split_whitespace();
            let key = toks.next().unwrap();
            if key == "rules" {
                break;
            }
            let vals: Vec<String> = toks.map(String::from).collect();
            if key == "machine" {
                if vals.len() != 1 {
                    return err(no, "expected 'machine <kind>'");
                }
                header.kind = vals[0].clone();
            } else if header.fields.insert(key.to_string(), (no, vals)).is_some() {
                return err(no, format!("duplicate header line '{key}'"));
            }
        }
        let rules: Vec<(usize, Vec<&str>)> = lines.map(|(no, l)| (no, l.split_whitespace().collect())).collect();
        match header.kind.as_str() {
            "nfa" => Ok(Machine::Nfa(parse_nfa(&header, &rules)?)),
            "dfa" => Ok(Machine::Dfa(parse_nfa(&header, &rules)?.to_dfa()?)),
            "dpda" => Ok(Machine::Dpda(located(0, parse_pda(&header, &rules)?.build_dpda())?)),
            "npda" => Ok(Machine::Npda(parse_pda(&header, &rules)?.build_npda()?)),
            "transducer" => Ok(Machine::Transducer(parse_transducer(&header, &rules)?)),
            "" => err(1, "missing 'machine <kind>' line"),
            other => err(1, format!("unknown machine kind '{other}'")),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("machine {}\n", self.kind());
        let join = |v: &[String]| v.join(" ");
        match self {
            Machine::Nfa(n) => {
                let names = n.state_names();
                writeln!(s, "states {}", join(names)).unwrap();
                writeln!(s, "input {}", join(n.alphabet().symbols())).unwrap();
                let init: Vec<_> = n.initial_states().iter().map(|&q| names[q].clone()).collect();
                writeln!(s, "initial {}", join(&init)).unwrap();
                let acc: Vec<_> = (0..n.num_states()).filter(|&q| n.is_accepting(q)).map(|q| names[q].clone()).collect();
                writeln!(s, "accepting {}", join(&acc)).unwrap();
                s.push_str("rules\n");
                for (from, a, to) in n.transitions() {
                    let a = a.map_or(EPSILON_TOKEN, |a| n.alphabet().name(a));
                    writeln!(s, "{} {} -> {}", names[from], a, names[to]).unwrap();
                }
            }
            Machine::Dfa(d) => {
                let names: Vec<String> = (0..d.num_states()).map(|q| format!("q{q}")).collect();
                writeln!(s, "states {}", join(&names)).unwrap();
                writeln!(s, "input {}", join(d.alphabet().symbols())).unwrap();
                writeln!(s, "initial {}", names[d.initial_state()]).unwrap();
                let acc: Vec<_> = (0..d.num_states()).filter(|&q| d.is_accepting(q)).map(|q| names[q].clone()).collect();
                writeln!(s, "accepting {}", join(&acc)).unwrap();
                s.push_str("rules\n");
                for q in 0..d.num_states() {
                    for a in 0..d.alphabet().len() {
                        writeln!(s, "{} {} -> {}", names[q], d.alphabet().name(a), names[d.next(q, a)]).unwrap();
                    }
                }
            }
            Machine::Dpda(p) => write_pda(&mut s, p.state_names(), p.input_alphabet(), p.stack_alphabet(), p.bottom(), p.initial_state(), &|q| p.is_accepting(q), p.rules()),
            Machine::Npda(p) => write_pda(&mut s, p.state_names(), p.input_alphabet(), p.stack_alphabet(), p.bottom(), p.initial_state(), &|q| p.is_accepting(q), p.rules()),
            Machine::Transducer(t) => {
                let names = t.state_names();
                writeln!(s, "states {}", join(names)).unwrap();
                writeln!(s, "input {}", join(t.input_alphabet().symbols())).unwrap();
                writeln!(s, "output {}", join(t.output_alphabet().symbols())).unwrap();
                writeln!(s, "initial {}", names[t.initial_state()]).unwrap();
                let acc: Vec<_> = (0..names.len()).filter(|&q| t.final_output(q).is_some()).collect();
                let acc_names: Vec<_> = acc.iter().map(|&q| names[q].clone()).collect();
                writeln!(s, "accepting {}", join(&acc_names)).unwrap();
                s.push_str("rules\n");
                let out = |w: &[usize]| w.iter().map(|&o| format!(" {}", t.output_alphabet().name(o))).collect::<String>();
                for r in t.rules() {
                    writeln!(s, "{} {} -> {} /{}", names[r.from], t.input_alphabet().name(r.input), names[r.to], out(&r.output)).unwrap();
                }
                for q in acc {
                    let fin = t.final_output(q).unwrap();
                    if !fin.is_empty() {
                        writeln!(s, "final {} /{}", names[q], out(fin)).unwrap();
                    }
                }
            }
        }
        s
    }
}

#[allow(clippy::too_many_arguments)]
fn write_pda(
    s: &mut String,
    names: &[String],
    input: &Alphabet,
    stack: &Alphabet,
    bottom: usize,
    initial: usize,
    accepting: &dyn Fn(usize) -> bool,
    rules: &[super::PdaRule],
) {
    writeln!(s, "states {}", names.join(" ")).unwrap();
    writeln!(s, "input {}", input.symbols().join(" ")).unwrap();
    writeln!(s, "stack {}", stack.symbols().join(" ")).unwrap();
    writeln!(s, "bottom {}", stack.name(bottom)).unwrap();
    writeln!(s, "initial {}", names[initial]).unwrap();
    let acc: Vec<_> = (0..names.len()).filter(|&q| accepting(q)).map(|q| names[q].as_str()).collect();
    writeln!(s, "accepting {}", acc.join(" ")).unwrap();
    s.push_str("rules\n");
    for r in rules {
        let a = r.input.map_or(EPSILON_TOKEN, |a| input.name(a));
        let push: String = r.push.iter().map(|&x| format!(" {}", stack.name(x))).collect();
        writeln!(s, "{} {} {} -> {}{}", names[r.from], a, stack.name(r.top), names[r.to], push).unwrap();
    }
}

fn state_table(header: &Header) -> Result<HashMap<&str, usize>, AutomatonError> {
    let mut table = HashMap::new();
    for (i, q) in header.list("states")?.iter().enumerate() {
        if table.insert(q.as_str(), i).is_some() {
            return err(header.fields["states"].0, format!("duplicate state {q}"));
        }
    }
    Ok(table)
}

fn lookup(table: &HashMap<&str, usize>, name: &str, line: usize) -> Result<usize, AutomatonError> {
    table.get(name).copied().map_or_else(|| err(line, format!("state {name} is not declared")), Ok)
}

fn split_arrow<'a>(line: usize, toks: &'a [&'a str]) -> Result<(&'a [&'a str], &'a [&'a str]), AutomatonError> {
    match toks.iter().position(|&t| t == "->") {
        Some(i) => Ok((&toks[..i], &toks[i + 1..])),
        None => err(line, "expected '->'"),
    }
}

fn parse_nfa(header: &Header, rules: &[(usize, Vec<&str>)]) -> Result<Nfa, AutomatonError> {
    let alphabet = header.alphabet("input")?;
    let table = state_table(header)?;
    let mut b = NfaBuilder::new(alphabet.clone());
    for q in header.list("states")? {
        b.add_named_state(q.clone());
    }
    for q in header.list("initial")? {
        b.set_initial(lookup(&table, q, header.fields["initial"].0)?);
    }
    for q in header.opt_list("accepting") {
        b.set_accepting(lookup(&table, q, header.fields["accepting"].0)?, true);
    }
    for (no, toks) in rules {
        let (lhs, rhs) = split_arrow(*no, toks)?;
        if lhs.len() != 2 || rhs.len() != 1 {
            return err(*no, "expected 'from symbol -> to'");
        }
        let from = lookup(&table, lhs[0], *no)?;
        let to = lookup(&table, rhs[0], *no)?;
        if lhs[1] == EPSILON_TOKEN {
            b.add_epsilon(from, to);
        } else {
            let a = alphabet.index_of(lhs[1]).map_or_else(|| err(*no, format!("unknown symbol {}", lhs[1])), Ok)?;
            b.add_transition(from, a, to);
        }
    }
    Ok(b.build())
}

fn parse_pda(header: &Header, rules: &[(usize, Vec<&str>)]) -> Result<PdaBuilder, AutomatonError> {
    let bottom = header.list("bottom")?;
    if bottom.len() != 1 {
        return err(header.fields["bottom"].0, "expected one bottom symbol");
    }
    let mut b = located(header.fields["bottom"].0, PdaBuilder::new(header.alphabet("input")?, header.alphabet("stack")?, &bottom[0]))?;
    let table = state_table(header)?;
    for q in header.list("states")? {
        b.state(q);
    }
    let init = header.list("initial")?;
    if init.len() != 1 {
        return err(header.fields["initial"].0, "a pushdown automaton has one initial state");
    }
    lookup(&table, &init[0], header.fields["initial"].0)?;
    b.initial(&init[0]);
    for q in header.opt_list("accepting") {
        lookup(&table, q, header.fields["accepting"].0)?;
        b.accepting(q);
    }
    for (no, toks) in rules {
        let (lhs, rhs) = split_arrow(*no, toks)?;
        if lhs.len() != 3 || rhs.is_empty() {
            return err(*no, "expected 'from input top -> to push...'");
        }
        lookup(&table, lhs[0], *no)?;
        lookup(&table, rhs[0], *no)?;
        let input = (lhs[1] != EPSILON_TOKEN).then_some(lhs[1]);
        located(*no, b.rule(lhs[0], input, lhs[2], rhs[0], &rhs[1..]).map(|_| ()))?;
    }
    Ok(b)
}

fn parse_transducer(header: &Header, rules: &[(usize, Vec<&str>)]) -> Result<Transducer, AutomatonError> {
    let mut b = TransducerBuilder::new(header.alphabet("input")?, header.alphabet("output")?);
    let table = state_table(header)?;
    for q in header.list("states")? {
        b.state(q);
    }
    let init = header.list("initial")?;
    if init.len() != 1 {
        return err(header.fields["initial"].0, "a transducer has one initial state");
    }
    lookup(&table, &init[0], header.fields["initial"].0)?;
    b.initial(&init[0]);
    for q in header.opt_list("accepting") {
        lookup(&table, q, header.fields["accepting"].0)?;
        b.accepting(q, &[])?;
    }
    for (no, toks) in rules {
        if toks[0] == "final" {
            if toks.len() < 3 || toks[2] != "/" {
                return err(*no, "expected 'final state / output...'");
            }
            lookup(&table, toks[1], *no)?;
            if !header.opt_list("accepting").iter().any(|q| q == toks[1]) {
                return err(*no, format!("state {} is not accepting", toks[1]));
            }
            located(*no, b.accepting(toks[1], &toks[3..]).map(|_| ()))?;
            continue;
        }
        let (lhs, rhs) = split_arrow(*no, toks)?;
        if lhs.len() != 2 || rhs.len() < 2 || rhs[1] != "/" {
            return err(*no, "expected 'from input -> to / output...'");
        }
        lookup(&table, lhs[0], *no)?;
        lookup(&table, rhs[0], *no)?;
        located(*no, b.rule(lhs[0], lhs[1], rhs[0], &rhs[2..]).map(|_| ()))?;
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::words_up_to;

    const ANBN: &str = "\
machine npda
states p r f
input a b
stack Z X
bottom Z
initial p
accepting f
rules
p a Z -> p X Z
p a X -> p X X
p b X -> r
r b X -> r   # pop
r _ Z -> f Z
";

    #[test]
    fn pda_round_trip() {
        let m = Machine::parse(ANBN).unwrap();
        assert_eq!(Machine::parse(&m.to_text()).unwrap().to_text(), m.to_text());
        let Machine::Npda(n) = m else { panic!() };
        assert!(n.accepts_str("aabb").unwrap());
        let d = Machine::parse(&ANBN.replace("npda", "dpda")).unwrap();
        assert_eq!(d.kind(), "dpda");
    }

    #[test]
    fn nfa_and_dfa_round_trip() {
        let a = Alphabet::from_chars("ab").unwrap();
        let n = Nfa::from_regex(&a, "(a|b)*ab").unwrap();
        let text = Machine::Nfa(n.clone()).to_text();
        let Machine::Nfa(back) = Machine::parse(&text).unwrap() else { panic!() };
        let d = Machine::Dfa(n.determinize());
        let Machine::Dfa(dback) = Machine::parse(&d.to_text()).unwrap() else { panic!() };
        for w in words_up_to(2, 7) {
            assert_eq!(back.accepts(&w), n.accepts(&w));
            assert_eq!(dback.accepts(&w), n.accepts(&w));
        }
    }

    #[test]
    fn transducer_round_trip() {
        let text = "\
machine transducer
states s t
input a
output x y
initial s
accepting s t
rules
s a -> t / x x
t a -> t /
final t / y
";
        let m = Machine::parse(text).unwrap();
        assert_eq!(m.to_text(), text);
        let Machine::Transducer(t) = m else { panic!() };
        assert_eq!(t.transduce_str("aaa").unwrap().as_deref(), Some("xxy"));
        assert_eq!(t.transduce_str("").unwrap().as_deref(), Some(""));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = ANBN.replace("r b X -> r", "r b Y -> r");
        assert!(matches!(Machine::parse(&bad), Err(AutomatonError::Format { line: 12, .. })));
        let bad = ANBN.replace("p b X -> r", "p b X r");
        assert!(matches!(Machine::parse(&bad), Err(AutomatonError::Format { line: 11, .. })));
        assert!(Machine::parse("machine foo\n").is_err());
        let nondet = ANBN.replace("npda", "dpda") + "p a Z -> f Z\n";
        assert!(Machine::parse(&nondet).is_err());
    }
}
