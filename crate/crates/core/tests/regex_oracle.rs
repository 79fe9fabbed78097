//! The home-grown regex compiler against the `regex` crate.

use duality::automata::{words_up_to, Alphabet, Nfa};

const PATTERNS: [&str; 8] = [
    "a*",
    "[01a]*a0*a[01a]*",
    "[01a]*a1*a[01a]*",
    "[01]*1[01a]*",
    "[01a]*0[01]*",
    "(0|1)+a?",
    "((01)*a)?1",
    "0?1*(a|0)+",
];

#[test]
fn agrees_on_short_words() {
    let sigma = Alphabet::from_chars("01a").unwrap();
    for p in PATTERNS {
        let ours = Nfa::from_regex(&sigma, p).unwrap();
        let dfa = ours.determinize();
        let theirs = regex::Regex::new(&format!("^(?:{p})$")).unwrap();
        for w in words_up_to(3, 7) {
            let text = sigma.render(&w);
            let want = theirs.is_match(&text);
            assert_eq!(ours.accepts(&w), want, "{p} on {text:?}");
            assert_eq!(dfa.accepts(&w), want, "{p} on {text:?} (dfa)");
        }
    }
}
