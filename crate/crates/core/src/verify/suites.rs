use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracles::{oracle_a, oracle_immerman, oracle_plus, oracle_points, oracle_successor};
use super::{Failure, Outcome, Params};
use crate::automata::Sym;
use crate::constructions::{
    addition_dpda, build_tuple_transformation, complement_decomposition_member, immerman_alphabet,
    immerman_member, in_a, neutral_alphabet, npda_for_a, parse_bits, register_languages, successor_window_check,
    NEUTRAL,
};
use crate::logic::{
    eval, eval_letterless, parse_formula, relation_of, rewrite_letter_to_equalities, Assignment, Compiled, Registry,
    WordStructure,
};
use crate::par::Execution;
use crate::semilinear::{diff_transform, diff_tuple, emit_folin, folin_vars, prefix_sums, sort_tuple, LinearSet, SemilinearSet};
use crate::structures::{gamma_alphabet, is_unary_structure, render_word, Mask, NumRelation, VnStructure};

// The i-th word of length `len` over `chars` in lexicographic order.
fn word_at(chars: &[u8], len: usize, mut i: u64) -> String {
    let k = chars.len() as u64;
    let mut w = vec![0u8; len];
    for slot in w.iter_mut().rev() {
        *slot = chars[(i % k) as usize];
        i /= k;
    }
    String::from_utf8(w).unwrap()
}

// Runs `check` on every word over `chars` of length at most `max_len`.
fn sweep_words<F>(exec: Execution, chars: &str, max_len: usize, check: F) -> Outcome
where
    F: Fn(&str) -> Option<Failure> + Send + Sync,
{
    let k = chars.len() as u64;
    let mut out = Outcome { cases: 0, failures: Vec::new() };
    for len in 0..=max_len {
        let n = k.pow(len as u32);
        out.cases += n;
        out.failures.extend(exec.filter_map(n, |i| check(&word_at(chars.as_bytes(), len, i))));
    }
    out
}

// Tuple number `i` in `1..=bound` to the power `arity`, last coordinate fastest.
fn tuple_at(arity: usize, bound: u64, mut i: u64) -> Vec<u32> {
    let mut t = vec![0u32; arity];
    for slot in t.iter_mut().rev() {
        *slot = (i % bound) as u32 + 1;
        i /= bound;
    }
    t
}

fn param(p: &Params, name: &str) -> u64 {
    p[name]
}

pub(super) fn run_successor_windows(p: &Params, exec: Execution) -> Outcome {
    let max_n = param(p, "max_n") as u32;
    let mut out = Outcome { cases: 0, failures: Vec::new() };
    for n in 1..=max_n {
        out.cases += 1 << (2 * n - 1);
        out.failures.extend(exec.filter_map(1 << (2 * n), |i| {
            let (u, v) = (i >> n, i & ((1 << n) - 1));
            if (u ^ v) & 1 == 0 {
                return None;
            }
            let u = format!("{u:0w$b}", w = n as usize);
            let v = format!("{v:0w$b}", w = n as usize);
            let expected = oracle_successor(&u, &v).unwrap();
            let actual = match successor_window_check(&parse_bits(&u).unwrap(), &parse_bits(&v).unwrap()) {
                Ok(b) => b.to_string(),
                Err(e) => format!("error: {e}"),
            };
            (actual != expected.to_string()).then(|| Failure::new(format!("{u},{v}"), expected, actual))
        }));
    }
    out
}

/// Γ_3 words up to this length are also swept unfiltered, to check that
/// non-structures are rejected.
const ADDITION_RAW_LEN: u64 = 5;

pub(super) fn run_addition_dpda(p: &Params, exec: Execution) -> Outcome {
    let max_len = param(p, "max_len");
    let dpda = addition_dpda();
    let accepts = |w: &[Mask]| {
        let syms: Vec<Sym> = w.iter().map(|&x| x as Sym).collect();
        dpda.accepts(&syms)
    };
    let mut out = Outcome { cases: 0, failures: Vec::new() };
    for m in 1..=max_len {
        out.cases += m.pow(3);
        out.failures.extend(exec.filter_map(m.pow(3), |i| {
            let t = tuple_at(3, m, i);
            let s = VnStructure::encode(&t, m as usize).unwrap();
            let expected = oracle_plus(t[0].into(), t[1].into(), t[2].into());
            let actual = accepts(s.word()).map_err(|e| e.to_string());
            (actual != Ok(expected))
                .then(|| Failure::new(render_word(s.word()), expected, format!("{actual:?}")))
        }));
    }
    for len in 0..=max_len.min(ADDITION_RAW_LEN) {
        out.cases += 8u64.pow(len as u32);
        out.failures.extend(exec.filter_map(8u64.pow(len as u32), |i| {
            let w: Vec<Mask> = (0..len).rev().map(|k| ((i >> (3 * k)) & 7) as Mask).collect();
            if is_unary_structure(&w, 3) {
                return None;
            }
            let actual = accepts(&w).map_err(|e| e.to_string());
            (actual != Ok(false)).then(|| Failure::new(render_word(&w), false, format!("{actual:?}")))
        }));
    }
    out
}

/// Example words for the complement decomposition, checked at every scale.
pub const COMPLEMENT_GOLDEN: [&str; 6] =
    ["00a01a11a11a", "a", "0a1a0a1", "01a10a11a00", "00a01a10a11a00a01", "00a01001a10a11"];

pub(super) fn run_immerman_complement(p: &Params, exec: Execution) -> Outcome {
    let alphabet = immerman_alphabet();
    let check = |w: &str| {
        let syms = alphabet.parse_word(w).unwrap();
        let expected = !oracle_immerman(w);
        let actual = complement_decomposition_member(&syms);
        (actual != expected).then(|| Failure::new(w, expected, actual))
    };
    let mut out = sweep_words(exec, "01a", param(p, "max_len") as usize, check);
    out.cases += COMPLEMENT_GOLDEN.len() as u64;
    out.failures.extend(COMPLEMENT_GOLDEN.iter().filter_map(|w| check(w)));
    out
}

pub(super) fn run_npda_a(p: &Params, exec: Execution) -> Outcome {
    let alphabet = immerman_alphabet();
    let npda = npda_for_a();
    sweep_words(exec, "01a", param(p, "max_len") as usize, |w| {
        let syms = alphabet.parse_word(w).unwrap();
        let expected = oracle_a(w);
        let by_npda = npda.accepts(&syms).map_err(|e| e.to_string());
        let by_def = in_a(&syms);
        (by_npda != Ok(expected) || by_def != expected)
            .then(|| Failure::new(w, expected, format!("npda={by_npda:?} in_A={by_def}")))
    })
}

pub(super) fn run_neutral_immerman(p: &Params, exec: Execution) -> Outcome {
    let alphabet = neutral_alphabet();
    let member = crate::structures::neutralize(immerman_member, NEUTRAL);
    let co_member = crate::structures::neutralize(complement_decomposition_member, NEUTRAL);
    sweep_words(exec, "01ae", param(p, "max_len") as usize, |w| {
        let syms = alphabet.parse_word(w).unwrap();
        let expected = oracle_immerman(&w.replace('e', ""));
        let (inside, outside) = (member(&syms), co_member(&syms));
        (inside != expected || outside == expected)
            .then(|| Failure::new(w, expected, format!("L={inside} co-L={outside}")))
    })
}

fn plus_registry() -> Registry {
    let mut r = Registry::standard();
    register_languages(&mut r);
    r
}

pub(super) fn run_lindstrom_plus(p: &Params, exec: Execution) -> Outcome {
    let (max_c, window) = (param(p, "max_c"), param(p, "window"));
    let r = plus_registry();
    let phis: Vec<String> = build_tuple_transformation(3).iter().map(|f| f.to_string()).collect();
    let lind = parse_formula(&format!("lind[addition] y. [{}]", phis.join("; ")), &r).unwrap();
    let plus = parse_formula("plus(x1, x2, x3)", &r).unwrap();
    let vars = ["x1".to_string(), "x2".to_string(), "x3".to_string()];
    let lind = Compiled::new(&lind, &r, None, &vars).unwrap();
    let plus = Compiled::new(&plus, &r, None, &vars).unwrap();
    let cases = max_c.pow(3) * (window + 1);
    let failures = exec
        .filter_map(max_c.pow(3), |i| {
            let t = tuple_at(3, max_c, i);
            let c = *t.iter().max().unwrap() as usize;
            let expected = oracle_plus(t[0].into(), t[1].into(), t[2].into());
            let bad: Vec<Failure> = (c..=c + window as usize)
                .filter_map(|m| {
                    let (a, b) = (lind.holds(None, m, &t), plus.holds(None, m, &t));
                    (a != expected || b != expected)
                        .then(|| Failure::new(format!("{t:?} m={m}"), expected, format!("lind={a} plus={b}")))
                })
                .collect();
            (!bad.is_empty()).then_some(bad)
        })
        .into_iter()
        .flatten()
        .collect();
    Outcome { cases, failures }
}

/// Random semilinear sets: arity 1..=3, one or two components, at most two
/// periods each, entries in 0..=4.
pub fn random_semilinear_sets(seed: u64, count: usize) -> Vec<SemilinearSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let entries = |rng: &mut ChaCha8Rng| (0..n).map(|_| rng.gen_range(0..=4)).collect::<Vec<u64>>();
            let comps = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let base = entries(&mut rng);
                    let periods = (0..rng.gen_range(0..=2)).map(|_| entries(&mut rng)).collect();
                    LinearSet::new(base, periods).unwrap()
                })
                .collect();
            SemilinearSet::new(comps).unwrap()
        })
        .collect()
}

pub(super) fn run_semilinear_folin(p: &Params, exec: Execution) -> Outcome {
    let bound = param(p, "bound");
    let sets = random_semilinear_sets(param(p, "seed"), param(p, "sets") as usize);
    let cases = sets.iter().map(|s| bound.pow(s.arity().unwrap() as u32)).sum();
    let failures = exec
        .filter_map(sets.len() as u64, |i| {
            let s = &sets[i as usize];
            let n = s.arity().unwrap();
            let r = Registry::standard();
            let f = emit_folin(s);
            let rel = match relation_of(&f, &folin_vars(n), bound as u32, 4, &r) {
                Ok(rel) => rel,
                Err(e) => return Some(vec![Failure::new(format!("#{i} {}", s.to_json()), "relation", e)]),
            };
            let points = oracle_points(s, bound);
            let bad: Vec<Failure> = (0..bound.pow(n as u32))
                .filter_map(|k| {
                    let t = tuple_at(n, bound, k);
                    let t64: Vec<u64> = t.iter().map(|&x| x.into()).collect();
                    let expected = points.contains(&t64);
                    let (by_formula, by_member) = (rel.contains(&t), s.contains(&t64));
                    (by_formula != expected || by_member != expected).then(|| {
                        Failure::new(
                            format!("#{i} {} {t:?}", s.to_json()),
                            expected,
                            format!("formula={by_formula} member={by_member}"),
                        )
                    })
                })
                .collect();
            (!bad.is_empty()).then_some(bad)
        })
        .into_iter()
        .flatten()
        .collect();
    Outcome { cases, failures }
}

pub(super) fn run_sort_diff(p: &Params, exec: Execution) -> Outcome {
    let (max_arity, bound) = (param(p, "max_arity") as usize, param(p, "bound"));
    let mut out = Outcome { cases: 0, failures: Vec::new() };
    for k in 1..=max_arity {
        let n = bound.pow(k as u32);
        out.cases += n + 1;
        out.failures.extend(exec.filter_map(n, |i| {
            let t = tuple_at(k, bound, i);
            let distinct: Vec<u32> = t.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            let sorted = sort_tuple(&t);
            if sorted != distinct {
                return Some(Failure::new(format!("sort {t:?}"), format!("{distinct:?}"), format!("{sorted:?}")));
            }
            let ascending = t.windows(2).all(|w| w[0] < w[1]);
            let gaps: Vec<u32> = (0..k).map(|j| if j == 0 { t[0] } else { t[j].wrapping_sub(t[j - 1]) }).collect();
            match diff_tuple(&t) {
                Ok(d) if ascending && d == gaps && prefix_sums(&d) == t => None,
                Err(_) if !ascending => None,
                other => Some(Failure::new(format!("diff {t:?}"), format!("{gaps:?}"), format!("{other:?}"))),
            }
        }));
        let ascending: Vec<Vec<u32>> =
            (0..n).map(|i| tuple_at(k, bound, i)).filter(|t| t.windows(2).all(|w| w[0] < w[1])).collect();
        let rel = NumRelation::from_tuples(k, bound as u32, ascending.iter().cloned());
        let back: Option<BTreeSet<Vec<u32>>> =
            diff_transform(&rel).ok().map(|d| d.iter().map(|t| prefix_sums(t)).collect());
        if back.as_ref() != Some(&rel.tuples) {
            out.failures.push(Failure::new(format!("relation arity {k}"), "identity", "differs"));
        }
    }
    out
}

/// FO[<] sentences over Γ_2 for the letter rewriting, each flagged with
/// whether its truth depends only on the encoded tuple (not on padding).
pub const PROP3_SENTENCES: [(&str, bool); 10] = [
    ("exists z. Qx1(z)", true),
    ("exists z. Qx1+x2(z)", true),
    ("exists y. exists z. y < z & Qx1(y) & Qx2(z)", true),
    ("forall z. Qx1(z) -> exists y. y < z", true),
    ("exists z. Q.(z)", false),
    ("forall z. (Qx2(z) | Qx1+x2(z)) -> !exists y. z < y", false),
    ("exists y. exists z. y < z & Qx2(y) & Q.(z)", false),
    ("exists y. exists z. y < z & Qx1(y) & Qx2(z) & !exists w. y < w & w < z", true),
    ("forall z. Q.(z) -> exists y. y < z & !Q.(y)", true),
    ("forall y. forall z. Qx1(y) & Qx2(z) -> y < z | exists w. z < w & w < y & Q.(w)", true),
];

pub(super) fn run_prop3_rewrite(p: &Params, exec: Execution) -> Outcome {
    let (max_c, window) = (param(p, "max_c"), param(p, "window"));
    let r = Registry::standard();
    let gamma = gamma_alphabet(2).unwrap();
    let sentences: Vec<_> = PROP3_SENTENCES
        .iter()
        .map(|(text, invariant)| {
            let f = parse_formula(text, &r).unwrap();
            let g = rewrite_letter_to_equalities(&f, 2).unwrap();
            (f, g, *invariant)
        })
        .collect();
    let per_sentence = max_c * max_c;
    let cases = sentences.len() as u64 * per_sentence * (window + 1);
    let failures = exec
        .filter_map(sentences.len() as u64 * per_sentence, |i| {
            let (f, g, invariant) = &sentences[(i / per_sentence) as usize];
            let t = tuple_at(2, max_c, i % per_sentence);
            let c = *t.iter().max().unwrap() as usize;
            let alpha: Assignment = [("x1".to_string(), t[0]), ("x2".to_string(), t[1])].into();
            let mut first = None;
            let bad: Vec<Failure> = (c..=c + window as usize)
                .filter_map(|m| {
                    let s = VnStructure::encode(&t, m).unwrap();
                    let word = WordStructure::new(gamma.clone(), s.word().iter().map(|&x| x as Sym).collect());
                    let on_word = eval(f, &word, &Assignment::new(), &r).unwrap();
                    let rewritten = eval_letterless(g, m, &alpha, &r).unwrap();
                    let start = *first.get_or_insert(on_word);
                    let input = format!("{f} {t:?} m={m}");
                    if on_word != rewritten {
                        Some(Failure::new(input, on_word, rewritten))
                    } else if *invariant && on_word != start {
                        Some(Failure::new(input, format!("{start} at m={c}"), on_word))
                    } else {
                        None
                    }
                })
                .collect();
            (!bad.is_empty()).then_some(bad)
        })
        .into_iter()
        .flatten()
        .collect();
    Outcome { cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_order() {
        let words: Vec<String> = (0..9).map(|i| word_at(b"01a", 2, i)).collect();
        assert_eq!(words, ["00", "01", "0a", "10", "11", "1a", "a0", "a1", "aa"]);
        assert_eq!(tuple_at(2, 3, 0), [1, 1]);
        assert_eq!(tuple_at(2, 3, 5), [2, 3]);
    }

    #[test]
    fn random_sets_are_reproducible() {
        let a = random_semilinear_sets(7, 5);
        assert_eq!(a, random_semilinear_sets(7, 5));
        assert!(a.iter().all(|s| s.arity().is_some_and(|n| (1..=3).contains(&n))));
    }
}
