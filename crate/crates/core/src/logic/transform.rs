//! Syntactic transformations between letter formulas over Γ_n and letter-free
//! formulas over the variables x1..xn.

use std::collections::BTreeSet;

use super::{EvalError, Formula};
use crate::structures::{parse_symbol, symbol_name, Mask};

fn var_name(i: usize) -> String {
    format!("x{i}")
}

fn all_names(f: &Formula) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    f.visit(&mut |g| match g {
        Formula::Letter { var, .. } => {
            names.insert(var.clone());
        }
        Formula::Num { args, .. } => names.extend(args.iter().cloned()),
        Formula::Less(a, b) | Formula::Equal(a, b) => {
            names.insert(a.clone());
            names.insert(b.clone());
        }
        Formula::Exists(v, _) | Formula::Forall(v, _) | Formula::Majority(v, _) => {
            names.insert(v.clone());
        }
        Formula::ModExists { var, .. } | Formula::Lindstrom { var, .. } => {
            names.insert(var.clone());
        }
        _ => {}
    });
    names
}

struct Renamer {
    avoid: BTreeSet<String>,
    used: BTreeSet<String>,
    counter: usize,
    // innermost last: (old, new)
    scope: Vec<(String, String)>,
}

impl Renamer {
    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.counter += 1;
            let cand = format!("{base}_{}", self.counter);
            if !self.used.contains(&cand) && !self.avoid.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
        }
    }

    fn resolve(&self, v: &str) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(old, _)| old == v)
            .map_or_else(|| v.to_string(), |(_, new)| new.clone())
    }

    fn binder(&mut self, v: &str) -> String {
        let new = if self.avoid.contains(v) { self.fresh(v) } else { v.to_string() };
        self.scope.push((v.to_string(), new.clone()));
        new
    }

    fn go(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False => f.clone(),
            Formula::Letter { symbol, var } => Formula::Letter { symbol: symbol.clone(), var: self.resolve(var) },
            Formula::Num { name, params, args } => Formula::Num {
                name: name.clone(),
                params: params.clone(),
                args: args.iter().map(|a| self.resolve(a)).collect(),
            },
            Formula::Less(a, b) => Formula::Less(self.resolve(a), self.resolve(b)),
            Formula::Equal(a, b) => Formula::Equal(self.resolve(a), self.resolve(b)),
            Formula::Not(g) => Formula::not(self.go(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.go(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.go(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.go(a), self.go(b)),
            Formula::Iff(a, b) => Formula::iff(self.go(a), self.go(b)),
            Formula::Exists(v, g) => self.scoped(v, |r, nv| Formula::Exists(nv, Box::new(r.go(g)))),
            Formula::Forall(v, g) => self.scoped(v, |r, nv| Formula::Forall(nv, Box::new(r.go(g)))),
            Formula::Majority(v, g) => self.scoped(v, |r, nv| Formula::Majority(nv, Box::new(r.go(g)))),
            Formula::ModExists { q, r, var, body } => self.scoped(var, |rn, nv| Formula::ModExists {
                q: *q,
                r: *r,
                var: nv,
                body: Box::new(rn.go(body)),
            }),
            Formula::Lindstrom { language, var, bodies } => self.scoped(var, |r, nv| Formula::Lindstrom {
                language: language.clone(),
                var: nv,
                bodies: bodies.iter().map(|g| r.go(g)).collect(),
            }),
        }
    }

    fn scoped(&mut self, v: &str, build: impl FnOnce(&mut Self, String) -> Formula) -> Formula {
        let nv = self.binder(v);
        let out = build(self, nv);
        self.scope.pop();
        out
    }
}

/// Renames every bound variable whose name is in `avoid` to a fresh name.
pub fn rename_bound(f: &Formula, avoid: &BTreeSet<String>) -> Formula {
    let mut r = Renamer { avoid: avoid.clone(), used: all_names(f), counter: 0, scope: Vec::new() };
    r.go(f)
}

fn replace_letters(f: &Formula, n: usize) -> Result<Formula, EvalError> {
    let rec = |g: &Formula| replace_letters(g, n);
    let boxed = |g: &Formula| replace_letters(g, n).map(Box::new);
    Ok(match f {
        Formula::Letter { symbol, var } => {
            let mask = parse_symbol(symbol, n).map_err(|_| EvalError::NotGamma(symbol.clone()))?;
            Formula::and(
                (1..=n)
                    .map(|i| {
                        let eq = Formula::eq(var, &var_name(i));
                        if mask & (1 << (i - 1)) != 0 {
                            eq
                        } else {
                            Formula::not(eq)
                        }
                    })
                    .collect(),
            )
        }
        Formula::True | Formula::False | Formula::Num { .. } | Formula::Less(..) | Formula::Equal(..) => f.clone(),
        Formula::Not(g) => Formula::Not(boxed(g)?),
        Formula::And(gs) => Formula::And(gs.iter().map(rec).collect::<Result<_, _>>()?),
        Formula::Or(gs) => Formula::Or(gs.iter().map(rec).collect::<Result<_, _>>()?),
        Formula::Implies(a, b) => Formula::Implies(boxed(a)?, boxed(b)?),
        Formula::Iff(a, b) => Formula::Iff(boxed(a)?, boxed(b)?),
        Formula::Exists(v, g) => Formula::Exists(v.clone(), boxed(g)?),
        Formula::Forall(v, g) => Formula::Forall(v.clone(), boxed(g)?),
        Formula::Majority(v, g) => Formula::Majority(v.clone(), boxed(g)?),
        Formula::ModExists { q, r, var, body } => {
            Formula::ModExists { q: *q, r: *r, var: var.clone(), body: boxed(body)? }
        }
        Formula::Lindstrom { language, var, bodies } => Formula::Lindstrom {
            language: language.clone(),
            var: var.clone(),
            bodies: bodies.iter().map(rec).collect::<Result<_, _>>()?,
        },
    })
}

/// Replaces each letter atom `Q{V}(z)` over Γ_n by
/// `AND_{x_i in V} z = x_i & AND_{x_i not in V} !z = x_i`. Bound variables named
/// like some x_i are renamed first so the new atoms are not captured.
pub fn rewrite_letter_to_equalities(f: &Formula, n: usize) -> Result<Formula, EvalError> {
    let avoid: BTreeSet<String> = (1..=n).map(var_name).collect();
    replace_letters(&rename_bound(f, &avoid), n)
}

fn masks_with(n: usize, i: usize) -> impl Iterator<Item = Mask> {
    (1..(1u32 << n)).filter(move |m| m & (1 << (i - 1)) != 0)
}

/// χ(x1..xn), binding each x_i to the unique position whose letter contains it:
/// `AND_i OR_{V ∋ x_i} (Q_V(x_i) & forall z. ((OR_{V' ∋ x_i} Q_V'(z)) <-> z = x_i))`.
pub fn build_chi(n: usize) -> Formula {
    assert!(n >= 1);
    Formula::and(
        (1..=n)
            .map(|i| {
                let xi = var_name(i);
                let holds_xi = || Formula::or(masks_with(n, i).map(|v| Formula::letter(&symbol_name(v), "z")).collect());
                let unique = Formula::forall("z", Formula::iff(holds_xi(), Formula::eq("z", &xi)));
                Formula::or(
                    masks_with(n, i)
                        .map(|v| Formula::And(vec![Formula::letter(&symbol_name(v), &xi), unique.clone()]))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// χ with the disjunction outside the biconditional:
/// `forall z. OR_{V' ∋ x_i} (Q_V'(z) <-> z = x_i)`. For n >= 2 this does not
/// force x_i to occur only once.
pub fn build_chi_weak(n: usize) -> Formula {
    assert!(n >= 1);
    Formula::and(
        (1..=n)
            .map(|i| {
                let xi = var_name(i);
                let inner = Formula::forall(
                    "z",
                    Formula::or(
                        masks_with(n, i)
                            .map(|v| Formula::iff(Formula::letter(&symbol_name(v), "z"), Formula::eq("z", &xi)))
                            .collect(),
                    ),
                );
                Formula::or(
                    masks_with(n, i)
                        .map(|v| Formula::And(vec![Formula::letter(&symbol_name(v), &xi), inner.clone()]))
                        .collect(),
                )
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{eval, parse_formula, Assignment, Registry, WordStructure};
    use crate::structures::{gamma_alphabet, parse_word};

    fn chi_holds(chi: &Formula, n: usize, word: &str, tuple: &[u32]) -> bool {
        let alphabet = gamma_alphabet(n).unwrap();
        let w: Vec<usize> = parse_word(word, n).unwrap().into_iter().map(|m| m as usize).collect();
        let s = WordStructure::new(alphabet, w);
        let alpha: Assignment = tuple.iter().enumerate().map(|(i, &c)| (var_name(i + 1), c)).collect();
        eval(chi, &s, &alpha, &Registry::standard()).unwrap()
    }

    #[test]
    fn rewriting_examples() {
        let r = Registry::standard();
        let f = parse_formula("Qx1(z)", &r).unwrap();
        assert_eq!(rewrite_letter_to_equalities(&f, 2).unwrap().to_string(), "z = x1 & !z = x2");
        let g = parse_formula("Q.(z)", &r).unwrap();
        assert_eq!(rewrite_letter_to_equalities(&g, 1).unwrap().to_string(), "!z = x1");
        let h = parse_formula("forall y. exists z. y < z | plus(y, y, z)", &r).unwrap();
        assert_eq!(rewrite_letter_to_equalities(&h, 2).unwrap(), h);
        assert!(matches!(
            rewrite_letter_to_equalities(&parse_formula("Qa(z)", &r).unwrap(), 2),
            Err(EvalError::NotGamma(_))
        ));
    }

    #[test]
    fn capture_is_avoided() {
        let r = Registry::standard();
        let f = parse_formula("exists x1. Qx1(x1)", &r).unwrap();
        let g = rewrite_letter_to_equalities(&f, 1).unwrap();
        assert_eq!(g.free_vars(), ["x1".to_string()].into());
        assert_eq!(g.to_string(), "exists x1_1. x1_1 = x1");
    }

    #[test]
    fn chi_examples() {
        let chi = build_chi(1);
        assert!(chi_holds(&chi, 1, "x1", &[1]));
        assert!(!chi_holds(&chi, 1, ". x1", &[1]));
        assert!(!chi_holds(&chi, 1, "x1 x1", &[1]));
        assert!(!chi_holds(&chi, 1, "x1 x1", &[2]));
        let chi2 = build_chi(2);
        assert!(chi_holds(&chi2, 2, ". x2 x1", &[3, 2]));
        assert!(chi_holds(&chi2, 2, "x1+x2 .", &[1, 1]));
        assert!(!chi_holds(&chi2, 2, "x1+x2 x1", &[1, 1]));
    }

    #[test]
    fn weak_chi_misses_duplicates() {
        let weak = build_chi_weak(2);
        // x1 occurs twice, yet the weak formula is satisfied
        assert!(chi_holds(&weak, 2, "x1 x1 x2", &[1, 3]));
        assert!(!chi_holds(&build_chi(2), 2, "x1 x1 x2", &[1, 3]));
    }
}
