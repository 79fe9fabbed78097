//! Concrete languages and machines: successor windows, the addition DPDA,
//! the Immerman language and its complement, R_I, the Wotschke language, the
//! tuple transformation and the ψ/χ transducers.

mod addition;
mod binary;
mod immerman;
mod transducers;

use thiserror::Error;

use crate::automata::{Alphabet, AutomatonError, Sym};
use crate::logic::{Language, Registry};
use crate::structures::gamma_alphabet;

pub use addition::{
    addition_dpda, addition_dpda_gap_push, addition_language, build_tuple_transformation, delta_alphabet,
    delta_to_mask,
};
pub use binary::{int_of, parse_bits, successor_window_check, window_forbidden, FORBIDDEN};
pub use immerman::{
    complement_decomposition_member, immerman_alphabet, immerman_member, in_a, modified_immerman_member,
    neutral_alphabet, npda_for_a, npda_unequal_blocks, regular_components, ComplementDecomposition, NEUTRAL, ONE,
    SEP, ZERO,
};
pub use transducers::{chi_transducer, letters, psi_transducer};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("empty binary word")]
    EmptyWord,
    #[error("binary word of length {0} exceeds 64 bits")]
    TooLong(usize),
    #[error("{0:?} is not a binary word")]
    NotBinary(String),
    #[error("lengths differ: {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("u_0 = v_0 violates the hypothesis u_0 != v_0")]
    SameLowBit,
    #[error("unknown language {0:?}")]
    UnknownLanguage(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// `(a^n b)^n` for some n >= 0.
pub fn wotschke_member(w: &[Sym]) -> bool {
    const A: Sym = 0;
    const B: Sym = 1;
    let n = w.iter().filter(|&&c| c == B).count();
    if w.iter().any(|&c| c > B) || w.len() != n * (n + 1) {
        return false;
    }
    w.chunks(n + 1).all(|chunk| chunk[..n].iter().all(|&c| c == A) && chunk[n] == B)
}

/// The languages exposed by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedLanguage {
    Immerman,
    ImmermanComplement,
    A,
    ModifiedImmerman,
    Wotschke,
    Addition,
}

impl NamedLanguage {
    pub const ALL: [NamedLanguage; 6] = [
        NamedLanguage::Immerman,
        NamedLanguage::ImmermanComplement,
        NamedLanguage::A,
        NamedLanguage::ModifiedImmerman,
        NamedLanguage::Wotschke,
        NamedLanguage::Addition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedLanguage::Immerman => "immerman",
            NamedLanguage::ImmermanComplement => "immerman-complement",
            NamedLanguage::A => "A",
            NamedLanguage::ModifiedImmerman => "modified-immerman",
            NamedLanguage::Wotschke => "wotschke",
            NamedLanguage::Addition => "addition",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConstructionError> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == name)
            .ok_or_else(|| ConstructionError::UnknownLanguage(name.to_string()))
    }

    /// Alphabet of the words handed to [`NamedLanguage::contains`]. For
    /// `addition` this is Γ_3.
    pub fn alphabet(self) -> Alphabet {
        match self {
            NamedLanguage::Wotschke => Alphabet::from_chars("ab").unwrap(),
            NamedLanguage::Addition => gamma_alphabet(3).unwrap(),
            _ => immerman_alphabet(),
        }
    }

    pub fn contains(self, w: &[Sym]) -> bool {
        match self {
            NamedLanguage::Immerman => immerman_member(w),
            NamedLanguage::ImmermanComplement => complement_decomposition_member(w),
            NamedLanguage::A => in_a(w),
            NamedLanguage::ModifiedImmerman => modified_immerman_member(w),
            NamedLanguage::Wotschke => wotschke_member(w),
            NamedLanguage::Addition => addition_dpda().accepts(w).unwrap_or(false),
        }
    }

    pub fn contains_str(self, text: &str) -> Result<bool, ConstructionError> {
        Ok(self.contains(&self.alphabet().parse_word(text)?))
    }
}

/// Registers every named language for Lindström quantifiers. `addition` uses
/// the Δ ordering of [`build_tuple_transformation`]; the others use their own
/// alphabets.
pub fn register_languages(registry: &mut Registry) {
    for lang in NamedLanguage::ALL {
        let language = match lang {
            NamedLanguage::Addition => addition_language(),
            other => Language::new(other.alphabet(), move |w| other.contains(w)),
        };
        registry.register_language(lang.name(), language);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{eval, parse_formula, Assignment, WordStructure};

    #[test]
    fn wotschke_examples() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let m = |t: &str| wotschke_member(&ab.parse_word(t).unwrap());
        assert!(m(""));
        assert!(m("ab"));
        assert!(m("aabaab"));
        assert!(m("aaabaaabaaab"));
        assert!(!m("aab"));
        assert!(!m("abab"));
        assert!(!m("b"));
    }

    #[test]
    fn named_languages() {
        assert_eq!(NamedLanguage::from_name("immerman"), Ok(NamedLanguage::Immerman));
        assert!(NamedLanguage::from_name("nope").is_err());
        assert_eq!(NamedLanguage::Immerman.contains_str("00a01a10a11"), Ok(true));
        assert_eq!(NamedLanguage::ImmermanComplement.contains_str("00a01a10a11"), Ok(false));
        assert_eq!(NamedLanguage::Addition.contains_str(". x1 x2 . x3"), Ok(true));
        assert!(NamedLanguage::Wotschke.contains_str("abc").is_err());
    }

    #[test]
    fn lindstrom_over_registered_language() {
        let mut r = Registry::standard();
        register_languages(&mut r);
        // the word itself, read letter by letter, must be a Wotschke word
        let f = parse_formula("lind[wotschke] y. [Qa(y)]", &r).unwrap();
        let ab = Alphabet::from_chars("ab").unwrap();
        let holds = |t: &str| eval(&f, &WordStructure::parse(&ab, t).unwrap(), &Assignment::new(), &r).unwrap();
        assert!(holds("aabaab"));
        assert!(!holds("aab"));
        let plus = parse_formula(
            "lind[addition] y. [y = x1 & !y = x2 & !y = x3; !y = x1 & y = x2 & !y = x3; \
             y = x1 & y = x2 & !y = x3; !y = x1 & !y = x2 & y = x3; y = x1 & !y = x2 & y = x3; \
             !y = x1 & y = x2 & y = x3; y = x1 & y = x2 & y = x3]",
            &r,
        )
        .unwrap();
        let s = WordStructure::new(ab, vec![0; 7]);
        let alpha: Assignment = [("x1".into(), 3), ("x2".into(), 4), ("x3".into(), 7)].into();
        assert!(eval(&plus, &s, &alpha, &r).unwrap());
    }
}
