//! The transductions ψ: Γ_m* -> {a1..am, e}* and χ: {a1..am}* -> Γ_m* relating
//! sorted unary structures to bounded words a1^d1 ... am^dm.

use crate::automata::{Alphabet, Transducer, TransducerBuilder};
use crate::structures::{gamma_alphabet, symbol_name};

/// `{a1, ..., am}`, optionally followed by `e`.
pub fn letters(m: usize, with_e: bool) -> Alphabet {
    let mut names: Vec<String> = (1..=m).map(|j| format!("a{j}")).collect();
    if with_e {
        names.push("e".to_string());
    }
    Alphabet::new(names).unwrap()
}

/// ψ: every position up to and including the one holding x_j (after x_{j-1})
/// becomes `a_j`; padding after x_m becomes `e`. Only structures placing
/// x1 < x2 < ... < xm in singleton letters are translated.
pub fn psi_transducer(m: usize) -> Transducer {
    assert!(m >= 1);
    let mut b = TransducerBuilder::new(gamma_alphabet(m).unwrap(), letters(m, true));
    // state j waits for x_j; "done" has seen all; "start" only so that ψ(ε) = ε
    let state = |j: usize| if j > m { "done".to_string() } else { format!("q{j}") };
    b.initial("start").accepting("start", &[]).unwrap();
    b.accepting("done", &[]).unwrap();
    for j in 1..=m {
        let a = format!("a{j}");
        let x = symbol_name(1 << (j - 1));
        let from = state(j);
        b.rule(&from, ".", &from, &[&a]).unwrap();
        b.rule(&from, &x, &state(j + 1), &[&a]).unwrap();
        if j == 1 {
            b.rule("start", ".", &from, &[&a]).unwrap();
            b.rule("start", &x, &state(2), &[&a]).unwrap();
        }
    }
    b.rule("done", ".", "done", &["e"]).unwrap();
    b.build()
}

/// χ: a letter becomes `.` when the next letter equals it and `x_j` when it is
/// `a_j` ending a run. The decision is delayed by one letter, so the state
/// remembers the previous letter and emits its image on the next step or at
/// the end.
pub fn chi_transducer(m: usize) -> Transducer {
    assert!(m >= 1);
    let mut b = TransducerBuilder::new(letters(m, false), gamma_alphabet(m).unwrap());
    b.initial("start").accepting("start", &[]).unwrap();
    for j in 1..=m {
        let held = format!("p{j}");
        let x = symbol_name(1 << (j - 1));
        b.accepting(&held, &[&x]).unwrap();
        b.rule("start", &format!("a{j}"), &held, &[]).unwrap();
        for k in 1..=m {
            let out = if k == j { "." } else { x.as_str() };
            b.rule(&held, &format!("a{k}"), &format!("p{k}"), &[out]).unwrap();
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        let psi = psi_transducer(2);
        assert!(psi.is_deterministic());
        assert_eq!(psi.transduce_str(". x1 . x2 .").unwrap().as_deref(), Some("a1 a1 a2 a2 e"));
        assert_eq!(psi.transduce_str("").unwrap().as_deref(), Some(""));
        assert_eq!(psi.transduce_str("x2 x1").unwrap(), None);
        assert_eq!(psi.transduce_str(". x1").unwrap(), None);
    }

    #[test]
    fn chi_examples() {
        let chi = chi_transducer(1);
        assert_eq!(chi.transduce_str("a1").unwrap().as_deref(), Some("x1"));
        let chi3 = chi_transducer(3);
        assert!(chi3.is_deterministic());
        assert_eq!(chi3.transduce_str("a1 a1 a2 a3 a3").unwrap().as_deref(), Some(". x1 x2 . x3"));
        assert_eq!(chi3.transduce_str("").unwrap().as_deref(), Some(""));
    }

    #[test]
    fn psi_after_chi() {
        let (psi, chi) = (psi_transducer(2), chi_transducer(2));
        for w in ["a1 a2", "a1 a1 a2", "a1 a2 a2 a2"] {
            let mid = chi.transduce_str(w).unwrap().unwrap();
            assert_eq!(psi.transduce_str(&mid).unwrap().as_deref(), Some(w));
        }
    }
}
