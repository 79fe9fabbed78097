//! Addition as a DCFL numerical predicate, and the first-order transformation
//! turning a tuple of positions into its unary V_n-structure.

use crate::automata::{Alphabet, Dpda, PdaBuilder, Sym};
use crate::logic::{Formula, Language};
use crate::structures::{gamma_alphabet, symbol_name, Mask};

const BOTTOM: &str = "Z";
const COUNT: &str = "0";

fn builder() -> PdaBuilder {
    let stack = Alphabet::new([BOTTOM, COUNT]).unwrap();
    PdaBuilder::new(gamma_alphabet(3).unwrap(), stack, BOTTOM).unwrap()
}

/// Deterministic PDA over Γ_3 whose accepted structures encode exactly the
/// tuples with x1 + x2 = x3. One `0` is pushed per position up to the smaller
/// of x1, x2; positions after the larger one pop, the last pop on x3.
pub fn addition_dpda() -> Dpda {
    let mut b = builder();
    b.initial("z0").accepting("q_acc");
    for g in [BOTTOM, COUNT] {
        b.rule("z0", Some("."), g, "z0", &[COUNT, g]).unwrap();
        b.rule("z0", Some("x1"), g, "z_x", &[COUNT, g]).unwrap();
        b.rule("z0", Some("x2"), g, "z_y", &[COUNT, g]).unwrap();
        b.rule("z0", Some("x1+x2"), g, "z_xy", &[COUNT, g]).unwrap();
        b.rule("z_x", Some("."), g, "z_x", &[g]).unwrap();
        b.rule("z_x", Some("x2"), g, "z_xy", &[g]).unwrap();
        b.rule("z_y", Some("."), g, "z_y", &[g]).unwrap();
        b.rule("z_y", Some("x1"), g, "z_xy", &[g]).unwrap();
    }
    b.rule("z_xy", Some("."), COUNT, "z_xy", &[]).unwrap();
    b.rule("z_xy", Some("x3"), COUNT, "z_z", &[]).unwrap();
    b.rule("z_z", None, BOTTOM, "q_acc", &[BOTTOM]).unwrap();
    b.rule("q_acc", Some("."), BOTTOM, "q_acc", &[BOTTOM]).unwrap();
    b.build_dpda().unwrap()
}

/// Variant in which `z_x` pushes on padding and there is
/// no rule for `x1+x2` and none for trailing padding.
pub fn addition_dpda_gap_push() -> Dpda {
    let mut b = builder();
    b.initial("z0").accepting("q_acc");
    for g in [BOTTOM, COUNT] {
        b.rule("z0", Some("."), g, "z0", &[COUNT, g]).unwrap();
        b.rule("z0", Some("x1"), g, "z_x", &[COUNT, g]).unwrap();
        b.rule("z0", Some("x2"), g, "z_y", &[COUNT, g]).unwrap();
        b.rule("z_x", Some("."), g, "z_x", &[COUNT, g]).unwrap();
        b.rule("z_x", Some("x2"), g, "z_xy", &[g]).unwrap();
        b.rule("z_y", Some("."), g, "z_y", &[g]).unwrap();
        b.rule("z_y", Some("x1"), g, "z_xy", &[g]).unwrap();
    }
    b.rule("z_xy", Some("."), COUNT, "z_xy", &[]).unwrap();
    b.rule("z_xy", Some("x3"), COUNT, "z_z", &[]).unwrap();
    b.rule("z_z", None, BOTTOM, "q_acc", &[BOTTOM]).unwrap();
    b.build_dpda().unwrap()
}

/// The formulas φ_1..φ_{2^n-1} in y, x1..xn: φ_i says y is exactly the position
/// of the variables in the i-th nonempty subset (bitmask i).
pub fn build_tuple_transformation(n: usize) -> Vec<Formula> {
    assert!((1..=crate::structures::MAX_VARS).contains(&n));
    (1..(1u32 << n))
        .map(|mask| {
            Formula::and(
                (1..=n)
                    .map(|j| {
                        let eq = Formula::eq("y", &format!("x{j}"));
                        if mask & (1 << (j - 1)) != 0 {
                            eq
                        } else {
                            Formula::not(eq)
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Δ for the transformation: the nonempty Γ_n symbols in mask order, then `.`.
pub fn delta_alphabet(n: usize) -> Alphabet {
    let names: Vec<String> = (1..(1u32 << n)).chain([0]).map(symbol_name).collect();
    Alphabet::new(names).unwrap()
}

/// Δ-letter to Γ_n mask.
pub fn delta_to_mask(n: usize, d: Sym) -> Mask {
    if d + 1 == 1 << n {
        0
    } else {
        d as Mask + 1
    }
}

/// The addition DPDA's language over Δ = [`delta_alphabet`]`(3)`, for use as a
/// Lindström quantifier with [`build_tuple_transformation`]`(3)`.
pub fn addition_language() -> Language {
    let dpda = addition_dpda();
    Language::new(delta_alphabet(3), move |w| {
        let word: Vec<Sym> = w.iter().map(|&d| delta_to_mask(3, d) as Sym).collect();
        dpda.accepts(&word).unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{eval_lindstrom, Assignment, Registry, WordStructure};
    use crate::structures::VnStructure;

    fn accepts(p: &Dpda, tuple: &[u32], m: usize) -> bool {
        let s = VnStructure::encode(tuple, m).unwrap();
        let w: Vec<Sym> = s.word().iter().map(|&x| x as Sym).collect();
        p.accepts(&w).unwrap()
    }

    #[test]
    fn dpda_examples() {
        let p = addition_dpda();
        assert!(accepts(&p, &[2, 3, 5], 5));
        assert!(accepts(&p, &[3, 2, 5], 5));
        assert!(accepts(&p, &[1, 1, 2], 2));
        assert!(accepts(&p, &[1, 2, 3], 3));
        assert!(accepts(&p, &[1, 2, 3], 7));
        assert!(!accepts(&p, &[1, 1, 3], 3));
        assert!(!accepts(&p, &[2, 2, 2], 2));
        assert!(!p.accepts_str("x1 x1 x1").unwrap());
    }

    #[test]
    fn gap_push_variant_miscounts() {
        let p = addition_dpda_gap_push();
        assert!(accepts(&p, &[2, 1, 3], 3));
        assert!(accepts(&p, &[1, 2, 3], 3));
        // padding between x1 and x2 is pushed too, so x3 = 2 * x2 - 1 wins
        assert!(!accepts(&p, &[1, 3, 4], 4));
        assert!(accepts(&p, &[1, 3, 5], 5));
    }

    #[test]
    fn transformation_examples() {
        let one = build_tuple_transformation(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "y = x1");
        assert_eq!(build_tuple_transformation(3).len(), 7);
        assert_eq!(delta_alphabet(2).symbols(), &["x1", "x2", "x1+x2", "."]);
        assert_eq!(delta_to_mask(2, 3), 0);
        assert_eq!(delta_to_mask(2, 2), 3);
    }

    #[test]
    fn lindstrom_plus() {
        let r = Registry::standard();
        let lang = addition_language();
        let phis = build_tuple_transformation(3);
        let s = WordStructure::new(delta_alphabet(3), vec![0; 6]);
        let alpha: Assignment = [("x1".into(), 2), ("x2".into(), 3), ("x3".into(), 5)].into();
        assert!(eval_lindstrom(&lang, &phis, &s, &alpha, "y", &r).unwrap());
        let alpha: Assignment = [("x1".into(), 2), ("x2".into(), 3), ("x3".into(), 6)].into();
        assert!(!eval_lindstrom(&lang, &phis, &s, &alpha, "y", &r).unwrap());
    }
}
