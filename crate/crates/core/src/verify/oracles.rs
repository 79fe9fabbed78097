//! Brute-force reference definitions. Nothing here calls into the
//! constructions; words are plain strings over the usual characters.

use std::collections::BTreeSet;

use super::VerifyError;
use crate::semilinear::SemilinearSet;

fn value(bits: &str) -> Option<u128> {
    if bits.len() > 127 {
        return None;
    }
    bits.chars().try_fold(0u128, |acc, c| match c {
        '0' => Some(acc * 2),
        '1' => Some(acc * 2 + 1),
        _ => None,
    })
}

/// `<u> + 1 = <v> (mod 2^n)` with `n = |u| = |v|`.
pub fn oracle_successor(u: &str, v: &str) -> Result<bool, VerifyError> {
    if u.len() != v.len() {
        return Err(VerifyError::LengthMismatch(u.len(), v.len()));
    }
    let modulus = 1u128 << u.len();
    let (Some(a), Some(b)) = (value(u), value(v)) else {
        return Err(VerifyError::BadInput(format!("{u},{v}")));
    };
    Ok((a + 1) % modulus == b)
}

/// Membership in L_I by generating the one word of the right block length.
pub fn oracle_immerman(w: &str) -> bool {
    let n = w.find('a').unwrap_or(w.len());
    if n == 0 || n > 20 {
        return false;
    }
    let expected: Vec<String> = (0..1u32 << n).map(|i| format!("{i:0n$b}")).collect();
    w == expected.join("a")
}

/// Some adjacent nonempty blocks `u a v` fail `<u> + 1 = <v>` modulo
/// `2^k`, comparing only the last `k = min(|u|, |v|)` bits.
pub fn oracle_a(w: &str) -> bool {
    if !w.chars().all(|c| matches!(c, '0' | '1' | 'a')) {
        return false;
    }
    let blocks: Vec<&str> = w.split('a').collect();
    blocks.windows(2).any(|p| {
        let k = p[0].len().min(p[1].len());
        k >= 1 && !oracle_successor(&p[0][p[0].len() - k..], &p[1][p[1].len() - k..]).unwrap_or(false)
    })
}

pub fn oracle_plus(a: u64, b: u64, c: u64) -> bool {
    a + b == c
}

/// Every point of `s` with all coordinates at most `bound`, found by closing
/// each base under the periods.
pub fn oracle_points(s: &SemilinearSet, bound: u64) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for c in s.components() {
        let mut frontier = vec![c.base().to_vec()];
        let mut seen = BTreeSet::new();
        while let Some(p) = frontier.pop() {
            if p.iter().any(|&x| x > bound) || !seen.insert(p.clone()) {
                continue;
            }
            for q in c.periods() {
                frontier.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
            }
        }
        out.extend(seen);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::LinearSet;

    #[test]
    fn successor_examples() {
        assert_eq!(oracle_successor("11", "00"), Ok(true));
        assert_eq!(oracle_successor("00", "01"), Ok(true));
        assert_eq!(oracle_successor("00", "10"), Ok(false));
        assert!(oracle_successor("0", "00").is_err());
    }

    #[test]
    fn immerman_examples() {
        assert!(oracle_immerman("0a1"));
        assert!(oracle_immerman("00a01a10a11"));
        assert!(!oracle_immerman("00a01a10a11a"));
        assert!(!oracle_immerman(""));
        assert!(!oracle_immerman("a"));
    }

    #[test]
    fn a_examples() {
        assert!(oracle_a("00a01a11a11a"));
        assert!(!oracle_a("00a01a10a11"));
        assert!(!oracle_a("a0a1"));
        assert!(oracle_a("0a0"));
        assert!(!oracle_a("1a110"));
        assert!(oracle_a("1a111"));
    }

    #[test]
    fn points() {
        let s = SemilinearSet::new(vec![LinearSet::new(vec![1, 0], vec![vec![2, 0], vec![0, 1]]).unwrap()]).unwrap();
        let pts = oracle_points(&s, 3);
        assert_eq!(pts.len(), 8);
        assert!(pts.contains(&vec![3, 3]));
        assert!(!pts.contains(&vec![2, 0]));
    }
}
