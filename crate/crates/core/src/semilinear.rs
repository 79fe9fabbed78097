//! Linear and semilinear sets, Ginsburg's stratification condition, the
//! `sort`/`diff` normal forms for relations and FO[+] formulas for semilinear
//! sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Formula;
use crate::structures::NumRelation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemilinearError {
    #[error("vector of length {got} where arity {expected} is required")]
    Arity { expected: usize, got: usize },
    #[error("tuple {0:?} is not strictly ascending")]
    NotAscending(Vec<u32>),
    #[error("partition does not cover the relation exactly")]
    PartitionMismatch,
    #[error("{parts} parts but {witnesses} witnesses")]
    WitnessCount { parts: usize, witnesses: usize },
    #[error("bad semilinear JSON: {0}")]
    Json(String),
}

#[derive(Deserialize)]
struct RawLinear {
    base: Vec<u64>,
    #[serde(default)]
    periods: Vec<Vec<u64>>,
}

/// `base + k_1 p_1 + ... + k_r p_r` for all `k_j >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLinear")]
pub struct LinearSet {
    base: Vec<u64>,
    periods: Vec<Vec<u64>>,
}

impl TryFrom<RawLinear> for LinearSet {
    type Error = SemilinearError;

    fn try_from(raw: RawLinear) -> Result<Self, Self::Error> {
        LinearSet::new(raw.base, raw.periods)
    }
}

impl LinearSet {
    /// Zero periods are dropped.
    pub fn new(base: Vec<u64>, periods: Vec<Vec<u64>>) -> Result<Self, SemilinearError> {
        let n = base.len();
        if let Some(p) = periods.iter().find(|p| p.len() != n) {
            return Err(SemilinearError::Arity { expected: n, got: p.len() });
        }
        let periods = periods.into_iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
        Ok(LinearSet { base, periods })
    }

    pub fn arity(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn periods(&self) -> &[Vec<u64>] {
        &self.periods
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        if t.len() != self.arity() {
            return false;
        }
        let mut rest = Vec::with_capacity(t.len());
        for (&x, &b) in t.iter().zip(&self.base) {
            if x < b {
                return false;
            }
            rest.push(x - b);
        }
        solve(&self.periods, &mut rest)
    }
}

// Depth-first search over the coefficient of each period in turn.
fn solve(periods: &[Vec<u64>], rest: &mut [u64]) -> bool {
    let Some((p, tail)) = periods.split_first() else {
        return rest.iter().all(|&x| x == 0);
    };
    let max_k = p
        .iter()
        .zip(rest.iter())
        .filter(|(&pi, _)| pi > 0)
        .map(|(&pi, &ri)| ri / pi)
        .min()
        .unwrap_or(0);
    let mut applied = 0;
    let mut found = false;
    for k in 0..=max_k {
        if k > 0 {
            for (r, &pi) in rest.iter_mut().zip(p) {
                *r -= pi;
            }
            applied += 1;
        }
        if solve(tail, rest) {
            found = true;
            break;
        }
    }
    for (r, &pi) in rest.iter_mut().zip(p) {
        *r += applied * pi;
    }
    found
}

#[derive(Deserialize)]
struct RawSemilinear {
    components: Vec<LinearSet>,
}

/// Finite union of linear sets of one arity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSemilinear")]
pub struct SemilinearSet {
    components: Vec<LinearSet>,
}

impl TryFrom<RawSemilinear> for SemilinearSet {
    type Error = SemilinearError;

    fn try_from(raw: RawSemilinear) -> Result<Self, Self::Error> {
        SemilinearSet::new(raw.components)
    }
}

impl SemilinearSet {
    pub fn new(components: Vec<LinearSet>) -> Result<Self, SemilinearError> {
        if let Some(first) = components.first() {
            if let Some(c) = components.iter().find(|c| c.arity() != first.arity()) {
                return Err(SemilinearError::Arity { expected: first.arity(), got: c.arity() });
            }
        }
        Ok(SemilinearSet { components })
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    /// Arity of the components; `None` for the empty union.
    pub fn arity(&self) -> Option<usize> {
        self.components.first().map(LinearSet::arity)
    }

    pub fn contains(&self, t: &[u64]) -> bool {
        self.components.iter().any(|c| c.contains(t))
    }

    /// Every component has a stratified period set.
    pub fn is_stratified(&self) -> bool {
        self.components.iter().all(|c| is_stratified(c.periods()))
    }

    pub fn from_json(text: &str) -> Result<Self, SemilinearError> {
        serde_json::from_str(text).map_err(|e| SemilinearError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Ginsburg's condition: each vector has at most two nonzero coordinates and no
/// two vectors x, x' (possibly equal) cross, i.e. there are no i<j<k<l with
/// x_i x'_j x_k x'_l != 0.
pub fn is_stratified(periods: &[Vec<u64>]) -> bool {
    let mut pairs = Vec::new();
    for p in periods {
        let support: Vec<usize> = (0..p.len()).filter(|&i| p[i] != 0).collect();
        match support.len() {
            0 | 1 => {}
            2 => pairs.push((support[0], support[1])),
            _ => return false,
        }
    }
    // a vector with a single nonzero coordinate cannot supply both x_i and x_k
    !pairs
        .iter()
        .any(|&(i, k)| pairs.iter().any(|&(j, l)| i < j && j < k && k < l))
}

/// Pattern of equalities and order among the components: each entry is the rank
/// of its value among the distinct values.
pub type OrderType = Vec<usize>;

pub fn order_type(t: &[u32]) -> OrderType {
    let distinct: BTreeSet<u32> = t.iter().copied().collect();
    let ranks: Vec<u32> = distinct.into_iter().collect();
    t.iter().map(|x| ranks.binary_search(x).unwrap()).collect()
}

pub fn order_types(r: &NumRelation) -> BTreeMap<OrderType, NumRelation> {
    let mut out: BTreeMap<OrderType, NumRelation> = BTreeMap::new();
    for t in &r.tuples {
        out.entry(order_type(t))
            .or_insert_with(|| NumRelation::new(r.arity, r.bound))
            .insert(t.clone());
    }
    out
}

/// Distinct values of `t` in ascending order.
pub fn sort_tuple(t: &[u32]) -> Vec<u32> {
    t.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

/// `sort(R)`, grouped by the arity of the sorted tuples.
pub fn sort_transform(r: &NumRelation) -> BTreeMap<usize, NumRelation> {
    let mut out: BTreeMap<usize, NumRelation> = BTreeMap::new();
    for t in &r.tuples {
        let s = sort_tuple(t);
        out.entry(s.len()).or_insert_with(|| NumRelation::new(s.len(), r.bound)).insert(s);
    }
    out
}

/// Inverse of prefix summing: (y_1, y_2 - y_1, ..., y_n - y_{n-1}).
pub fn diff_tuple(t: &[u32]) -> Result<Vec<u32>, SemilinearError> {
    let mut prev = 0;
    let mut out = Vec::with_capacity(t.len());
    for &y in t {
        if y <= prev && !(out.is_empty() && y == 0) {
            return Err(SemilinearError::NotAscending(t.to_vec()));
        }
        out.push(y - prev);
        prev = y;
    }
    Ok(out)
}

pub fn prefix_sums(t: &[u32]) -> Vec<u32> {
    t.iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

pub fn diff_transform(r: &NumRelation) -> Result<BTreeSet<Vec<u32>>, SemilinearError> {
    r.tuples.iter().map(|t| diff_tuple(t)).collect()
}

/// Exponent tuples `(e_1..e_n)` with every `e_i <= cap` such that
/// `w_1^e_1 ... w_n^e_n` is accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRelation<T> {
    pub words: Vec<Vec<T>>,
    pub cap: u32,
    pub tuples: BTreeSet<Vec<u32>>,
}

pub fn exponent_relation<T: Clone>(
    member: impl Fn(&[T]) -> bool,
    words: &[Vec<T>],
    cap: u32,
) -> ExponentRelation<T> {
    assert!(words.iter().all(|w| !w.is_empty()), "words must be nonempty");
    let n = words.len();
    let mut tuples = BTreeSet::new();
    let mut e = vec![0u32; n];
    loop {
        let word: Vec<T> = e
            .iter()
            .zip(words)
            .flat_map(|(&k, w)| std::iter::repeat_n(w, k as usize).flatten().cloned())
            .collect();
        if member(&word) {
            tuples.insert(e.clone());
        }
        let Some(i) = (0..n).rev().find(|&i| e[i] < cap) else {
            break;
        };
        e[i] += 1;
        e[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
    ExponentRelation { words: words.to_vec(), cap, tuples }
}

/// Names of the free variables of [`emit_folin`]: `e1..en`.
pub fn folin_vars(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("e{k}")).collect()
}

struct Emitter {
    fresh: usize,
}

impl Emitter {
    fn aux(&mut self) -> String {
        self.fresh += 1;
        format!("s{}", self.fresh)
    }

    // target = t_1 + ... + t_r as a chain of plus atoms; r >= 1
    fn sum(&mut self, terms: &[String], target: &str) -> Formula {
        match terms {
            [t] => Formula::eq(t, target),
            [a, b] => Formula::num("plus", &[a, b, target]),
            [a, b, rest @ ..] => {
                let s = self.aux();
                let mut tail = vec![s.clone()];
                tail.extend_from_slice(rest);
                let inner = self.sum(&tail, target);
                Formula::exists(&s, Formula::And(vec![Formula::num("plus", &[a, b, &s]), inner]))
            }
            // e_k = 0 is impossible for a position; keep e_k free
            [] => Formula::not(Formula::eq(target, target)),
        }
    }
}

/// FO[+] formula with free variables `e1..en` defining the set over positive
/// integers. The constant 1 is the variable `o` pinned to the first position;
/// a zero coefficient is handled by leaving its period out, so each linear set
/// becomes a disjunction over subsets of its periods with positive coefficients.
pub fn emit_folin(s: &SemilinearSet) -> Formula {
    let n = s.arity().unwrap_or(1);
    let e = folin_vars(n);
    let mut em = Emitter { fresh: 0 };
    let mut disjuncts = Vec::new();
    for c in s.components() {
        let r = c.periods().len();
        for subset in 0u32..(1 << r) {
            let chosen: Vec<usize> = (0..r).filter(|j| subset & (1 << j) != 0).collect();
            let coeff: Vec<String> = chosen.iter().map(|j| format!("a{}", j + 1)).collect();
            let eqs: Vec<Formula> = (0..n)
                .map(|k| {
                    let mut terms: Vec<String> = vec!["o".to_string(); c.base()[k] as usize];
                    for (a, &j) in coeff.iter().zip(&chosen) {
                        terms.extend(std::iter::repeat_n(a.clone(), c.periods()[j][k] as usize));
                    }
                    em.sum(&terms, &e[k])
                })
                .collect();
            let mut body = Formula::and(eqs);
            for a in coeff.iter().rev() {
                body = Formula::exists(a, body);
            }
            disjuncts.push(body);
        }
    }
    let first = Formula::forall("y", Formula::not(Formula::less("y", "o")));
    Formula::exists("o", Formula::And(vec![first, Formula::or(disjuncts)]))
}

/// Checks one candidate for the CFL-relation criterion: `partition` must cover
/// `r` exactly; then every witness must be stratified and agree with
/// `diff(sort(R_i))` on all vectors whose prefix sums stay within `r.bound`.
pub fn check_cfln_criterion(
    r: &NumRelation,
    partition: &[NumRelation],
    witnesses: &[SemilinearSet],
) -> Result<bool, SemilinearError> {
    if partition.len() != witnesses.len() {
        return Err(SemilinearError::WitnessCount { parts: partition.len(), witnesses: witnesses.len() });
    }
    let union: BTreeSet<&Vec<u32>> = partition.iter().flat_map(|p| p.tuples.iter()).collect();
    if union != r.tuples.iter().collect() {
        return Err(SemilinearError::PartitionMismatch);
    }
    for (part, w) in partition.iter().zip(witnesses) {
        if !w.is_stratified() {
            return Ok(false);
        }
        let sorted = sort_transform(part);
        if sorted.len() > 1 {
            return Ok(false);
        }
        let Some((&m, rel)) = sorted.iter().next() else {
            // empty part: the witness must not have small members either
            if let Some(m) = w.arity() {
                if small_vectors(m, r.bound).any(|v| w.contains(&v)) {
                    return Ok(false);
                }
            }
            continue;
        };
        let d: BTreeSet<Vec<u64>> = diff_transform(rel)?
            .into_iter()
            .map(|t| t.into_iter().map(u64::from).collect())
            .collect();
        if w.arity().is_some_and(|a| a != m) || w.arity().is_none() {
            return Ok(false);
        }
        if !d.iter().all(|t| w.contains(t)) {
            return Ok(false);
        }
        if small_vectors(m, r.bound).any(|v| w.contains(&v) && !d.contains(&v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Vectors over N_0 of length m whose coordinate sum is at most `bound`.
fn small_vectors(m: usize, bound: u32) -> impl Iterator<Item = Vec<u64>> {
    let bound = u64::from(bound);
    let mut cur = vec![0u64; m];
    let mut done = m == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = cur.clone();
        let mut i = m;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur.iter().sum::<u64>() <= bound {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    })
}
