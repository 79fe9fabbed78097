//! Binary words `u_{n-1}..u_0` (most significant bit first) and the
//! successor-window characterization of `<u> + 1 = <v> (mod 2^n)`.

use super::ConstructionError;

/// The eight forbidden windows `u_i u_{i-1} v_i v_{i-1}`.
pub const FORBIDDEN: [&str; 8] = ["0010", "0011", "0100", "0111", "1001", "1000", "1110", "1101"];

/// Parses a string of `0`/`1` into bits.
pub fn parse_bits(text: &str) -> Result<Vec<u8>, ConstructionError> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(ConstructionError::NotBinary(text.to_string())),
        })
        .collect()
}

/// `<u>`; words longer than 64 bits are rejected.
pub fn int_of(u: &[u8]) -> Result<u64, ConstructionError> {
    if u.is_empty() {
        return Err(ConstructionError::EmptyWord);
    }
    if u.len() > 64 {
        return Err(ConstructionError::TooLong(u.len()));
    }
    Ok(u.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
}

fn is_forbidden(w: [u8; 4]) -> bool {
    let code = w.iter().fold(0u8, |acc, &b| (acc << 1) | b);
    // FORBIDDEN as 4-bit codes
    matches!(code, 0b0010 | 0b0011 | 0b0100 | 0b0111 | 0b1001 | 0b1000 | 0b1110 | 0b1101)
}

/// Whether `u_i u_{i-1} v_i v_{i-1}` is forbidden, `i` counted from the right.
pub fn window_forbidden(u: &[u8], v: &[u8], i: usize) -> bool {
    let (n, m) = (u.len(), v.len());
    is_forbidden([u[n - 1 - i], u[n - i], v[m - 1 - i], v[m - i]])
}

/// True iff no window `u_i u_{i-1} v_i v_{i-1}`, `1 <= i < n`, is forbidden.
/// Requires `|u| = |v| >= 1` and `u_0 != v_0`.
pub fn successor_window_check(u: &[u8], v: &[u8]) -> Result<bool, ConstructionError> {
    if u.len() != v.len() {
        return Err(ConstructionError::LengthMismatch(u.len(), v.len()));
    }
    if u.is_empty() {
        return Err(ConstructionError::EmptyWord);
    }
    if u[u.len() - 1] == v[v.len() - 1] {
        return Err(ConstructionError::SameLowBit);
    }
    Ok(!(1..u.len()).any(|i| window_forbidden(u, v, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Vec<u8> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn values() {
        assert_eq!(int_of(&b("101")), Ok(5));
        assert_eq!(int_of(&b("000")), Ok(0));
        assert_eq!(int_of(&b("1")), Ok(1));
        assert_eq!(int_of(&[]), Err(ConstructionError::EmptyWord));
        assert!(parse_bits("10a").is_err());
    }

    #[test]
    fn forbidden_codes_match_the_table() {
        for code in 0u8..16 {
            let bits = [(code >> 3) & 1, (code >> 2) & 1, (code >> 1) & 1, code & 1];
            let text: String = bits.iter().map(|b| char::from(b'0' + b)).collect();
            assert_eq!(is_forbidden(bits), FORBIDDEN.contains(&text.as_str()), "{text}");
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(successor_window_check(&b("11"), &b("00")), Ok(true));
        assert_eq!(successor_window_check(&b("00"), &b("11")), Ok(false));
        assert_eq!(successor_window_check(&b("01"), &b("10")), Ok(true));
        assert_eq!(successor_window_check(&b("0"), &b("1")), Ok(true));
        assert_eq!(successor_window_check(&b("01"), &b("11")), Err(ConstructionError::SameLowBit));
        assert_eq!(successor_window_check(&b("01"), &b("0")), Err(ConstructionError::LengthMismatch(2, 1)));
    }
}
