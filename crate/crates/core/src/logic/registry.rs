use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::automata::{Alphabet, Sym};

type EvalFn = dyn Fn(&[u64], u64) -> bool + Send + Sync;
type SolveFn = dyn Fn(&[Option<u64>], u64) -> Option<u64> + Send + Sync;
type Family = dyn Fn(&[u64]) -> Option<Predicate> + Send + Sync;

/// A numerical predicate: a relation on positions that may also depend on the
/// universe size m.
#[derive(Clone)]
pub struct Predicate {
    pub arity: usize,
    eval: Arc<EvalFn>,
    solve: Option<Arc<SolveFn>>,
}

impl Predicate {
    pub fn new(arity: usize, eval: impl Fn(&[u64], u64) -> bool + Send + Sync + 'static) -> Self {
        Predicate { arity, eval: Arc::new(eval), solve: None }
    }

    /// Adds a solver: given the arguments with exactly one unknown, returns
    /// the only value making the predicate true, if any. Used to skip the
    /// enumeration of existential witnesses.
    pub fn with_solver(
        mut self,
        solve: impl Fn(&[Option<u64>], u64) -> Option<u64> + Send + Sync + 'static,
    ) -> Self {
        self.solve = Some(Arc::new(solve));
        self
    }

    pub fn holds(&self, args: &[u64], m: u64) -> bool {
        (self.eval)(args, m)
    }

    pub fn solve(&self, args: &[Option<u64>], m: u64) -> Option<Option<u64>> {
        self.solve.as_ref().map(|s| s(args, m))
    }

    pub fn has_solver(&self) -> bool {
        self.solve.is_some()
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate(arity {})", self.arity)
    }
}

/// A language usable in a Lindström quantifier: an ordered alphabet Δ and a
/// membership test over words of Δ-indices.
#[derive(Clone)]
pub struct Language {
    pub alphabet: Alphabet,
    member: Arc<dyn Fn(&[Sym]) -> bool + Send + Sync>,
}

impl Language {
    pub fn new(alphabet: Alphabet, member: impl Fn(&[Sym]) -> bool + Send + Sync + 'static) -> Self {
        Language { alphabet, member: Arc::new(member) }
    }

    pub fn contains(&self, word: &[Sym]) -> bool {
        (self.member)(word)
    }
}

impl fmt::Debug for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Language({:?})", self.alphabet)
    }
}

/// Named numerical predicates, parameterized predicate families such as
/// `modq[q,r]`, and Lindström languages.
#[derive(Clone, Default)]
pub struct Registry {
    predicates: BTreeMap<String, Predicate>,
    families: BTreeMap<String, Arc<Family>>,
    languages: BTreeMap<String, Language>,
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Registry")
            .field("predicates", &self.predicates.keys().collect::<Vec<_>>())
            .field("families", &self.families.keys().collect::<Vec<_>>())
            .field("languages", &self.languages.keys().collect::<Vec<_>>())
            .finish()
    }
}

fn plus_solve(a: &[Option<u64>], _m: u64) -> Option<u64> {
    match *a {
        [None, Some(y), Some(z)] => z.checked_sub(y),
        [Some(x), None, Some(z)] => z.checked_sub(x),
        [Some(x), Some(y), None] => Some(x + y),
        _ => None,
    }
}

fn times_solve(a: &[Option<u64>], _m: u64) -> Option<u64> {
    let div = |z: u64, d: u64| (d != 0 && z.is_multiple_of(d)).then(|| z / d);
    match *a {
        [None, Some(y), Some(z)] => div(z, y),
        [Some(x), None, Some(z)] => div(z, x),
        [Some(x), Some(y), None] => Some(x * y),
        _ => None,
    }
}

fn eq_solve(a: &[Option<u64>], _m: u64) -> Option<u64> {
    a[0].or(a[1])
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// `<`, `=`, `plus`, `times`, `bit`, `even` and the family `modq[q,r]`.
    pub fn standard() -> Self {
        let mut r = Registry::default();
        r.register("<", Predicate::new(2, |a, _| a[0] < a[1]));
        r.register("=", Predicate::new(2, |a, _| a[0] == a[1]).with_solver(eq_solve));
        r.register("plus", Predicate::new(3, |a, _| a[0] + a[1] == a[2]).with_solver(plus_solve));
        r.register("times", Predicate::new(3, |a, _| a[0] * a[1] == a[2]).with_solver(times_solve));
        // bit(x, i): bit i of x (least significant is bit 0) is set
        r.register("bit", Predicate::new(2, |a, _| a[1] < 64 && (a[0] >> a[1]) & 1 == 1));
        r.register("even", Predicate::new(1, |a, _| a[0] % 2 == 0));
        r.register_family("modq", |p| match *p {
            [q, rem] if q > 0 && rem < q => Some(Predicate::new(1, move |a, _| a[0] % q == rem)),
            _ => None,
        });
        r
    }

    pub fn register(&mut self, name: &str, p: Predicate) {
        self.predicates.insert(name.to_string(), p);
    }

    pub fn register_family(
        &mut self,
        name: &str,
        make: impl Fn(&[u64]) -> Option<Predicate> + Send + Sync + 'static,
    ) {
        self.families.insert(name.to_string(), Arc::new(make));
    }

    pub fn register_language(&mut self, name: &str, language: Language) {
        self.languages.insert(name.to_string(), language);
    }

    /// Plain names take no parameters; family names need them.
    pub fn predicate(&self, name: &str, params: &[u64]) -> Option<Predicate> {
        if params.is_empty() {
            self.predicates.get(name).cloned()
        } else {
            self.families.get(name).and_then(|f| f(params))
        }
    }

    pub fn language(&self, name: &str) -> Option<&Language> {
        self.languages.get(name)
    }

    pub fn predicate_names(&self) -> impl Iterator<Item = &str> {
        self.predicates.keys().map(String::as_str)
    }

    pub fn language_names(&self) -> impl Iterator<Item = &str> {
        self.languages.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let r = Registry::standard();
        let plus = r.predicate("plus", &[]).unwrap();
        assert!(plus.holds(&[2, 3, 5], 5));
        assert!(!plus.holds(&[2, 3, 6], 6));
        assert_eq!(plus.solve(&[None, Some(3), Some(5)], 5), Some(Some(2)));
        assert_eq!(plus.solve(&[None, Some(6), Some(5)], 6), Some(None));
        let times = r.predicate("times", &[]).unwrap();
        assert_eq!(times.solve(&[Some(3), None, Some(7)], 7), Some(None));
        assert_eq!(times.solve(&[Some(3), None, Some(6)], 7), Some(Some(2)));
        let bit = r.predicate("bit", &[]).unwrap();
        assert!(bit.holds(&[5, 0], 5) && !bit.holds(&[5, 1], 5) && bit.holds(&[5, 2], 5));
        let m = r.predicate("modq", &[3, 1]).unwrap();
        assert!(m.holds(&[4], 4) && !m.holds(&[5], 5));
        assert!(r.predicate("modq", &[3, 3]).is_none());
        assert!(r.predicate("modq", &[]).is_none());
        assert!(r.predicate("even", &[]).unwrap().holds(&[2], 2));
        assert!(r.predicate("nope", &[]).is_none());
    }

    #[test]
    fn solvers_are_exact() {
        let r = Registry::standard();
        for name in ["plus", "times", "="] {
            let p = r.predicate(name, &[]).unwrap();
            for a in 1..8u64 {
                for b in 1..8u64 {
                    for hole in 0..p.arity {
                        let mut vals = [a, b].into_iter();
                        let known: Vec<Option<u64>> =
                            (0..p.arity).map(|i| if i == hole { None } else { vals.next() }).collect();
                        let sols: Vec<u64> = (1..80)
                            .filter(|&v| {
                                let args: Vec<u64> = known.iter().map(|k| k.unwrap_or(v)).collect();
                                p.holds(&args, 80)
                            })
                            .collect();
                        let got = p.solve(&known, 80).unwrap().filter(|&v| v >= 1);
                        assert_eq!(got.into_iter().collect::<Vec<_>>(), sols, "{name} {known:?}");
                    }
                }
            }
        }
    }
}
