use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use duality::automata::{Alphabet, Sym};
use duality::constructions::{
    addition_dpda, chi_transducer, immerman_member, psi_transducer, successor_window_check, NEUTRAL,
};
use duality::logic::{eval, parse_formula, Assignment, Formula, Registry, WordStructure};
use duality::semilinear::{
    diff_tuple, is_stratified, order_type, prefix_sums, sort_tuple, LinearSet, SemilinearSet,
};
use duality::structures::{neutralize, VnStructure};
use duality::verify::{oracle_points, oracle_successor};

const VARS: [&str; 3] = ["x", "y", "z"];
const LETTERS: [&str; 3] = ["a", "b", "c"];

// Straight recursion over the syntax tree with an explicit environment.
fn naive(f: &Formula, w: &[usize], env: &mut BTreeMap<String, u64>) -> bool {
    let m = w.len() as u64;
    let val = |env: &BTreeMap<String, u64>, v: &str| env[v];
    let count = |var: &str, body: &Formula, env: &mut BTreeMap<String, u64>| {
        let saved = env.get(var).copied();
        let mut c = 0u64;
        for p in 1..=m {
            env.insert(var.to_string(), p);
            if naive(body, w, env) {
                c += 1;
            }
        }
        match saved {
            Some(s) => env.insert(var.to_string(), s),
            None => env.remove(var),
        };
        c
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Letter { symbol, var } => {
            let idx = LETTERS.iter().position(|l| l == symbol).unwrap();
            w[val(env, var) as usize - 1] == idx
        }
        Formula::Less(a, b) => val(env, a) < val(env, b),
        Formula::Equal(a, b) => val(env, a) == val(env, b),
        Formula::Num { name, params, args } => {
            let a: Vec<u64> = args.iter().map(|v| val(env, v)).collect();
            match (name.as_str(), params.as_slice()) {
                ("plus", []) => a[0] + a[1] == a[2],
                ("even", []) => a[0].is_multiple_of(2),
                ("bit", []) => a[1] < 64 && (a[0] >> a[1]) & 1 == 1,
                ("modq", [q, r]) => a[0] % q == *r,
                other => panic!("no reference for {other:?}"),
            }
        }
        Formula::Not(g) => !naive(g, w, env),
        Formula::And(gs) => gs.iter().all(|g| naive(g, w, env)),
        Formula::Or(gs) => gs.iter().any(|g| naive(g, w, env)),
        Formula::Implies(a, b) => !naive(a, w, env) || naive(b, w, env),
        Formula::Iff(a, b) => naive(a, w, env) == naive(b, w, env),
        Formula::Exists(v, g) => count(v, g, env) > 0,
        Formula::Forall(v, g) => count(v, g, env) == m,
        Formula::ModExists { q, r, var, body } => count(var, body, env) % u64::from(*q) == u64::from(*r),
        Formula::Majority(v, g) => 2 * count(v, g, env) > m,
        Formula::Lindstrom { .. } => panic!("not covered"),
    }
}

fn var() -> impl Strategy<Value = String> {
    prop::sample::select(&VARS[..]).prop_map(String::from)
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (prop::sample::select(&LETTERS[..]), var()).prop_map(|(l, v)| Formula::letter(l, &v)),
        (var(), var()).prop_map(|(a, b)| Formula::less(&a, &b)),
        (var(), var()).prop_map(|(a, b)| Formula::eq(&a, &b)),
        (var(), var(), var()).prop_map(|(a, b, c)| Formula::num("plus", &[&a, &b, &c])),
        var().prop_map(|a| Formula::num("even", &[&a])),
        (var(), var()).prop_map(|(a, b)| Formula::num("bit", &[&a, &b])),
        var().prop_map(|a| Formula::Num { name: "modq".into(), params: vec![3, 1], args: vec![a] }),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
            (var(), inner.clone()).prop_map(|(v, f)| Formula::Exists(v, Box::new(f))),
            (var(), inner.clone()).prop_map(|(v, f)| Formula::Forall(v, Box::new(f))),
            (var(), inner.clone(), 1u32..4, 0u32..4).prop_map(|(v, f, q, r)| Formula::ModExists {
                q,
                r: r % q,
                var: v,
                body: Box::new(f)
            }),
            (var(), inner).prop_map(|(v, f)| Formula::Majority(v, Box::new(f))),
        ]
    })
}

fn close(f: Formula) -> Formula {
    VARS.iter().fold(f, |g, v| Formula::exists(v, g))
}

fn linear_set(n: usize) -> impl Strategy<Value = LinearSet> {
    (prop::collection::vec(0u64..5, n), prop::collection::vec(prop::collection::vec(0u64..5, n), 0..3))
        .prop_map(|(b, p)| LinearSet::new(b, p).unwrap())
}

fn semilinear() -> impl Strategy<Value = SemilinearSet> {
    (1usize..4).prop_flat_map(|n| {
        prop::collection::vec(linear_set(n), 1..3).prop_map(|c| SemilinearSet::new(c).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn eval_matches_reference(
        f in formula(),
        k in 1usize..=3,
        w in prop::collection::vec(0usize..3, 0..=8),
        vals in prop::collection::vec(0u32..8, 3),
    ) {
        let w: Vec<usize> = w.into_iter().map(|c| c % k).collect();
        let alphabet = Alphabet::new(LETTERS[..k].iter().copied()).unwrap();
        // letters outside the alphabet are a parse-level error, not a semantic one
        let mut uses_missing = false;
        f.visit(&mut |g| if let Formula::Letter { symbol, .. } = g {
            uses_missing |= alphabet.index_of(symbol).is_none();
        });
        prop_assume!(!uses_missing);
        let r = Registry::standard();
        let s = WordStructure::new(alphabet, w.clone());
        let sentence = close(f.clone());
        prop_assert_eq!(eval(&sentence, &s, &Assignment::new(), &r).unwrap(), naive(&sentence, &w, &mut BTreeMap::new()));
        if !w.is_empty() {
            let alpha: Assignment = VARS.iter().zip(&vals).map(|(v, &x)| (v.to_string(), x % w.len() as u32 + 1)).collect();
            let mut env: BTreeMap<String, u64> = alpha.iter().map(|(k, &v)| (k.clone(), u64::from(v))).collect();
            prop_assert_eq!(eval(&f, &s, &alpha, &r).unwrap(), naive(&f, &w, &mut env));
        }
    }

    #[test]
    fn print_parse_round_trip(f in formula()) {
        let r = Registry::standard();
        let text = f.to_string();
        let back = parse_formula(&text, &r).unwrap();
        prop_assert_eq!(back.to_string(), text);
        let ab = Alphabet::new(LETTERS).unwrap();
        for w in [vec![0, 1, 2], vec![2, 2, 0, 1, 1]] {
            let s = WordStructure::new(ab.clone(), w);
            let alpha: Assignment = VARS.iter().map(|v| (v.to_string(), 2)).collect();
            prop_assert_eq!(eval(&f, &s, &alpha, &r).unwrap(), eval(&back, &s, &alpha, &r).unwrap());
        }
    }

    #[test]
    fn kernel_idempotent_and_keeps_tuple(t in prop::collection::vec(1u32..10, 1..5), pad in 0usize..6) {
        let m = *t.iter().max().unwrap() as usize + pad;
        let s = VnStructure::encode(&t, m).unwrap();
        let k = s.kernel();
        prop_assert_eq!(k.kernel(), k.clone());
        prop_assert_eq!(k.tuple(), t.clone());
        prop_assert_eq!(s.tuple(), t);
        prop_assert_eq!(k.len() + pad, m);
    }

    #[test]
    fn sort_keeps_order_type_information(t in prop::collection::vec(1u32..12, 1..6)) {
        let s = sort_tuple(&t);
        prop_assert!(s.windows(2).all(|p| p[0] < p[1]));
        let ot = order_type(&t);
        for (i, &r) in ot.iter().enumerate() {
            prop_assert_eq!(s[r], t[i]);
        }
        let d = diff_tuple(&s).unwrap();
        prop_assert!(d.iter().all(|&x| x >= 1));
        prop_assert_eq!(prefix_sums(&d), s);
    }

    #[test]
    fn membership_matches_generation(s in semilinear(), probe in prop::collection::vec(0u64..10, 3)) {
        let n = s.arity().unwrap();
        let points = oracle_points(&s, 9);
        let t = &probe[..n];
        prop_assert_eq!(s.contains(t), points.contains(t));
        prop_assert!(points.iter().all(|p| s.contains(p)));
        let back = SemilinearSet::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn stratified_closed_under_subsets(
        periods in prop::collection::vec(prop::collection::vec(0u64..2, 4), 0..5),
        keep in prop::collection::vec(any::<bool>(), 5),
    ) {
        let sub: Vec<Vec<u64>> = periods.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p.clone()).collect();
        if is_stratified(&periods) {
            prop_assert!(is_stratified(&sub));
        }
    }

    #[test]
    fn successor_windows_long_words(n in 1usize..40, u in any::<u64>(), v in any::<u64>(), plus_one in any::<bool>()) {
        let mask = (1u64 << n) - 1;
        let a = u & mask;
        // half the time the true successor, otherwise anything with the other low bit
        let b = if plus_one { a.wrapping_add(1) & mask } else { (v & mask & !1) | (!a & 1) };
        let (us, vs) = (format!("{a:0n$b}"), format!("{b:0n$b}"));
        let to = |s: &str| s.bytes().map(|c| c - b'0').collect::<Vec<u8>>();
        prop_assert_eq!(successor_window_check(&to(&us), &to(&vs)).unwrap(), oracle_successor(&us, &vs).unwrap());
    }

    #[test]
    fn addition_dpda_on_long_structures(t in prop::collection::vec(1u32..40, 3), pad in 0usize..5) {
        let m = *t.iter().max().unwrap() as usize + pad;
        let s = VnStructure::encode(&t, m).unwrap();
        let w: Vec<Sym> = s.word().iter().map(|&x| x as Sym).collect();
        prop_assert_eq!(addition_dpda().accepts(&w).unwrap(), t[0] + t[1] == t[2]);
    }

    #[test]
    fn neutral_letters_are_invisible(n in 1usize..4, es in prop::collection::vec(0usize..40, 0..6)) {
        let mut w: Vec<Sym> = (0..1u32 << n)
            .map(|i| format!("{i:0n$b}"))
            .collect::<Vec<_>>()
            .join("a")
            .bytes()
            .map(|c| match c { b'0' => 0, b'1' => 1, _ => 2 })
            .collect();
        for e in es {
            let at = e % (w.len() + 1);
            w.insert(at, NEUTRAL);
        }
        prop_assert!(neutralize(immerman_member, NEUTRAL)(&w));
        prop_assert!(!immerman_member(&w) || !w.contains(&NEUTRAL));
    }

    #[test]
    fn psi_inverts_chi(d in prop::collection::vec(1usize..5, 1..4)) {
        let m = d.len();
        let word: Vec<String> = d.iter().enumerate().flat_map(|(j, &k)| vec![format!("a{}", j + 1); k]).collect();
        let text = word.join(" ");
        let mid = chi_transducer(m).transduce_str(&text).unwrap().unwrap();
        let s = VnStructure::parse(&mid, m).unwrap();
        let sums: Vec<u32> = prefix_sums(&d.iter().map(|&x| x as u32).collect::<Vec<_>>());
        prop_assert_eq!(s.tuple(), sums);
        prop_assert_eq!(psi_transducer(m).transduce_str(&mid).unwrap(), Some(text));
    }
}

#[test]
fn reference_evaluator_agrees_on_fixed_cases() {
    let r = Registry::standard();
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let f = parse_formula("!exists i.(even(i) & Qb(i))", &r).unwrap();
    let seen: BTreeSet<bool> = [vec![0, 1, 0, 1], vec![1, 0, 1, 0]]
        .into_iter()
        .map(|w| {
            let expected = naive(&f, &w, &mut BTreeMap::new());
            assert_eq!(eval(&f, &WordStructure::new(ab.clone(), w), &Assignment::new(), &r).unwrap(), expected);
            expected
        })
        .collect();
    assert_eq!(seen.len(), 2);
}
