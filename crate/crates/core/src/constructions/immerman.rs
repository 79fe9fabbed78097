//! The Immerman language L_I over {0, 1, a}, the context-free pieces of its
//! complement, and the alternately reversed variant R_I.

use std::sync::OnceLock;

use crate::automata::{Alphabet, Dfa, Nfa, Npda, PdaBuilder, Sym};

use super::binary::FORBIDDEN;

pub const ZERO: Sym = 0;
pub const ONE: Sym = 1;
pub const SEP: Sym = 2;
/// The neutral letter, in [`neutral_alphabet`] only.
pub const NEUTRAL: Sym = 3;

/// `{0, 1, a}`.
pub fn immerman_alphabet() -> Alphabet {
    Alphabet::from_chars("01a").unwrap()
}

/// `{0, 1, a, e}`.
pub fn neutral_alphabet() -> Alphabet {
    Alphabet::from_chars("01ae").unwrap()
}

fn blocks(w: &[Sym]) -> Vec<&[Sym]> {
    w.split(|&c| c == SEP).collect()
}

fn is_successor_sequence<'a>(blocks: impl Iterator<Item = &'a [Sym]>) -> bool {
    blocks.enumerate().all(|(i, b)| {
        // i < 2^n here, so the value fits whenever n < 64
        b.iter().fold(0u64, |acc, &c| (acc << 1) | c as u64) == i as u64
    })
}

fn count_ok(k: usize, n: usize) -> bool {
    (1..32).contains(&n) && k == 1usize << n
}

/// `x_1 a x_2 a ... a x_{2^n}` with `x_i` the n-bit binary numbers in order, n >= 1.
pub fn immerman_member(w: &[Sym]) -> bool {
    if w.iter().any(|&c| c > SEP) {
        return false;
    }
    let bs = blocks(w);
    let n = bs[0].len();
    count_ok(bs.len(), n) && bs.iter().all(|b| b.len() == n) && is_successor_sequence(bs.iter().copied())
}

/// As [`immerman_member`], but blocks at even (1-based) index are written reversed.
pub fn modified_immerman_member(w: &[Sym]) -> bool {
    if w.iter().any(|&c| c > SEP) {
        return false;
    }
    let bs = blocks(w);
    let n = bs[0].len();
    if !count_ok(bs.len(), n) || bs.iter().any(|b| b.len() != n) {
        return false;
    }
    let straight: Vec<Vec<Sym>> = bs
        .iter()
        .enumerate()
        .map(|(i, b)| if i % 2 == 1 { b.iter().rev().copied().collect() } else { b.to_vec() })
        .collect();
    is_successor_sequence(straight.iter().map(Vec::as_slice))
}

// <u> + 1 = <v> on the last k bits of each.
fn low_bits_successor(u: &[Sym], v: &[Sym], k: usize) -> bool {
    let u = &u[u.len() - k..];
    let v = &v[v.len() - k..];
    // adding one flips the trailing ones and the 0 before them
    let flip_from = u.iter().rposition(|&c| c == ZERO).unwrap_or(0);
    let all_ones = !u.contains(&ZERO);
    u.iter().zip(v).enumerate().all(|(i, (&a, &b))| {
        let incremented = if all_ones || i >= flip_from { 1 - a } else { a };
        incremented == b
    })
}

/// Words with two adjacent nonempty blocks `u a v` whose last `min(|u|, |v|)`
/// bits violate `<u> + 1 = <v>`. On equal-length blocks this is the A of the
/// complement construction.
pub fn in_a(w: &[Sym]) -> bool {
    if w.iter().any(|&c| c > SEP) {
        return false;
    }
    blocks(w).windows(2).any(|p| {
        let (u, v) = (p[0], p[1]);
        let k = u.len().min(v.len());
        k >= 1 && !low_bits_successor(u, v, k)
    })
}

const STACK_BOTTOM: &str = "Z";
const MARK: &str = "X";
const BITS: [&str; 2] = ["0", "1"];

struct Npb(PdaBuilder);

impl Npb {
    fn new() -> Self {
        let stack = Alphabet::new([STACK_BOTTOM, MARK]).unwrap();
        Npb(PdaBuilder::new(immerman_alphabet(), stack, STACK_BOTTOM).unwrap())
    }

    // move that leaves the stack alone, whatever is on top
    fn keep(&mut self, from: &str, input: Option<&str>, to: &str) {
        for g in [STACK_BOTTOM, MARK] {
            self.0.rule(from, input, g, to, &[g]).unwrap();
        }
    }

    fn push(&mut self, from: &str, input: &str, to: &str) {
        for g in [STACK_BOTTOM, MARK] {
            self.0.rule(from, Some(input), g, to, &[MARK, g]).unwrap();
        }
    }

    fn pop(&mut self, from: &str, input: Option<&str>, to: &str) {
        self.0.rule(from, input, MARK, to, &[]).unwrap();
    }

    fn on_bottom(&mut self, from: &str, input: Option<&str>, to: &str) {
        self.0.rule(from, input, STACK_BOTTOM, to, &[STACK_BOTTOM]).unwrap();
    }

    // block-start scanner `s` with a non-selected block state `mid`, and the
    // accepting sink `acc`
    fn skeleton(&mut self) {
        self.0.initial("s").accepting("acc");
        for b in BITS {
            self.keep("s", Some(b), "mid");
            self.keep("mid", Some(b), "mid");
        }
        self.keep("s", Some("a"), "s");
        self.keep("mid", Some("a"), "s");
        for c in ["0", "1", "a"] {
            self.keep("acc", Some(c), "acc");
        }
    }

    // accepting state that also accepts after a following separator
    fn block_end(&mut self, name: &str) {
        self.0.accepting(name);
        self.keep(name, Some("a"), "acc");
    }
}

/// NPDA for [`in_a`]. From the start of a block it guesses either that the
/// last bits of this block and the next agree, or a forbidden window
/// `u_i u_{i-1} v_i v_{i-1}`: it pushes one mark per bit after the window in u
/// and pops one per bit after the window in v.
pub fn npda_for_a() -> Npda {
    let mut p = Npb::new();
    p.skeleton();

    // equal last bits
    p.keep("s", None, "eq_u");
    for b in BITS {
        p.keep("eq_u", Some(b), "eq_u");
        let sep = format!("eq_sep{b}");
        let v = format!("eq_v{b}");
        p.keep("eq_u", Some(b), &sep);
        p.keep(&sep, Some("a"), &v);
        for c in BITS {
            p.keep(&v, Some(c), &v);
        }
        p.keep(&v, Some(b), "eq_end");
    }
    p.block_end("eq_end");

    // forbidden window
    p.keep("s", None, "w_u");
    for b in BITS {
        p.keep("w_u", Some(b), "w_u");
        p.keep("w_u", Some(b), &format!("w_u{b}"));
        for c in BITS {
            let hi = format!("w_u{b}");
            let uw = format!("w_u{b}{c}");
            let vw = format!("w_v{b}{c}");
            p.keep(&hi, Some(c), &uw);
            for d in BITS {
                p.push(&uw, d, &uw);
            }
            p.keep(&uw, Some("a"), &vw);
            for d in BITS {
                p.keep(&vw, Some(d), &vw);
                let vhi = format!("w_v{b}{c}{d}");
                p.keep(&vw, Some(d), &vhi);
                for e in BITS {
                    if FORBIDDEN.contains(&format!("{b}{c}{d}{e}").as_str()) {
                        p.keep(&vhi, Some(e), "w_pop");
                    }
                }
            }
        }
    }
    for d in BITS {
        p.pop("w_pop", Some(d), "w_pop");
    }
    p.on_bottom("w_pop", None, "w_end");
    p.block_end("w_end");
    p.0.build_npda().unwrap()
}

/// NPDA for adjacent blocks `u a v` (u possibly empty, v possibly empty) with
/// `|u| != |v|`.
pub fn npda_unequal_blocks() -> Npda {
    let mut p = Npb::new();
    p.skeleton();
    p.keep("s", None, "n_u");
    for b in BITS {
        p.push("n_u", b, "n_u");
    }
    p.keep("n_u", Some("a"), "n_v");
    for b in BITS {
        p.pop("n_v", Some(b), "n_v");
        // v is longer
        p.on_bottom("n_v", Some(b), "n_long");
        p.keep("n_long", Some(b), "n_long");
    }
    p.block_end("n_long");
    // u is longer: marks remain when v ends
    p.0.rule("n_v", None, MARK, "n_short", &[MARK]).unwrap();
    p.block_end("n_short");
    p.0.build_npda().unwrap()
}

const REGULAR_PARTS: [&str; 5] = [
    "a*",
    "[01a]*a0*a[01a]*",
    "[01a]*a1*a[01a]*",
    "[01]*1[01a]*",
    "[01a]*0[01]*",
];

/// DFA for the five regular components of the complement decomposition.
pub fn regular_components() -> Dfa {
    Nfa::from_regex(&immerman_alphabet(), &REGULAR_PARTS.join("|")).unwrap().determinize()
}

/// The complement of L_I as the union of A, five regular languages and the
/// unequal-adjacent-blocks language.
pub struct ComplementDecomposition {
    regular: Dfa,
    unequal: Npda,
}

impl Default for ComplementDecomposition {
    fn default() -> Self {
        Self::new()
    }
}

impl ComplementDecomposition {
    pub fn new() -> Self {
        ComplementDecomposition { regular: regular_components(), unequal: npda_unequal_blocks() }
    }

    /// Index of the first component containing `w` (0 = A, 1..=5 regular in
    /// display order, 6 = unequal blocks).
    pub fn component_of(&self, w: &[Sym]) -> Option<usize> {
        if w.iter().any(|&c| c > SEP) {
            return None;
        }
        if in_a(w) {
            return Some(0);
        }
        if self.regular.accepts(w) {
            let alphabet = immerman_alphabet();
            return REGULAR_PARTS
                .iter()
                .position(|re| Nfa::from_regex(&alphabet, re).unwrap().accepts(w))
                .map(|i| i + 1);
        }
        if self.unequal.accepts(w).expect("unequal-blocks NPDA stays within its stack cap") {
            return Some(6);
        }
        None
    }

    pub fn contains(&self, w: &[Sym]) -> bool {
        if w.iter().any(|&c| c > SEP) {
            return false;
        }
        in_a(w) || self.regular.accepts(w) || self.unequal.accepts(w).unwrap_or(false)
    }
}

/// Membership in the complement decomposition with a shared instance.
pub fn complement_decomposition_member(w: &[Sym]) -> bool {
    static DECOMPOSITION: OnceLock<ComplementDecomposition> = OnceLock::new();
    DECOMPOSITION.get_or_init(ComplementDecomposition::new).contains(w)
}
