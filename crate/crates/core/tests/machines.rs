//! The files under `machines/` are the text form of the built-in machines.

use std::path::PathBuf;

use duality::automata::{words_up_to, Machine};
use duality::constructions::{
    addition_dpda, addition_dpda_gap_push, chi_transducer, npda_for_a, npda_unequal_blocks, psi_transducer,
    regular_components,
};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("machines").join(format!("{name}.txt"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn built() -> Vec<(&'static str, Machine)> {
    vec![
        ("addition-dpda", Machine::Dpda(addition_dpda())),
        ("addition-dpda-gap-push", Machine::Dpda(addition_dpda_gap_push())),
        ("npda-A", Machine::Npda(npda_for_a())),
        ("npda-unequal", Machine::Npda(npda_unequal_blocks())),
        ("regular", Machine::Dfa(regular_components())),
        ("psi2", Machine::Transducer(psi_transducer(2))),
        ("chi2", Machine::Transducer(chi_transducer(2))),
    ]
}

#[test]
fn files_match_built_machines() {
    for (name, m) in built() {
        assert_eq!(m.to_text(), golden(name), "{name}");
    }
}

#[test]
fn parsed_files_behave_like_built_machines() {
    for (name, m) in built() {
        let parsed = Machine::parse(&golden(name)).unwrap();
        assert_eq!(parsed.to_text(), m.to_text(), "{name}");
        let max_len = if matches!(m, Machine::Transducer(_)) { 6 } else { 5 };
        let k = match &m {
            Machine::Dpda(p) => p.input_alphabet().len(),
            Machine::Npda(p) => p.input_alphabet().len(),
            Machine::Dfa(d) => d.alphabet().len(),
            Machine::Transducer(t) => t.input_alphabet().len(),
            Machine::Nfa(n) => n.alphabet().len(),
        };
        for w in words_up_to(k, max_len) {
            let same = match (&m, &parsed) {
                (Machine::Dpda(a), Machine::Dpda(b)) => a.accepts(&w).unwrap() == b.accepts(&w).unwrap(),
                (Machine::Npda(a), Machine::Npda(b)) => a.accepts(&w).unwrap() == b.accepts(&w).unwrap(),
                (Machine::Dfa(a), Machine::Dfa(b)) => a.accepts(&w) == b.accepts(&w),
                (Machine::Transducer(a), Machine::Transducer(b)) => a.transduce(&w).unwrap() == b.transduce(&w).unwrap(),
                _ => panic!("{name}: parsed as a different kind"),
            };
            assert!(same, "{name} on {w:?}");
        }
    }
}
