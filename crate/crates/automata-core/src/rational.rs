//! Exact rationals and their `"num/den"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n/d"` or `"n"`; the denominator must be positive.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(n, true) || !valid(d, false) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Always `"num/den"` in lowest terms, so `120` prints as `"120/1"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Human form: `"120"` for integers, `"7/2"` otherwise.
pub fn display_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rational("120"), Some(int(120)));
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
        assert_eq!(parse_rational("-1/3"), Some(ratio(-1, 3)));
    }

    #[test]
    fn rejects_junk() {
        for s in ["", "1/0", "a", "1/-2", "1//2", "--1", "1.5", "+3"] {
            assert_eq!(parse_rational(s), None, "{s}");
        }
    }

    #[test]
    fn canonical_text() {
        assert_eq!(format_rational(&ratio(10, 4)), "5/2");
        assert_eq!(format_rational(&int(7)), "7/1");
        assert_eq!(display_rational(&int(7)), "7");
    }
}
