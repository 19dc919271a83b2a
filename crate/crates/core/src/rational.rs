//! Helpers around [`BigRational`]: exact decimal parsing and rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every coefficient and barycentric weight.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `12`, `-3`, `3/4`, `-0.25`, `2.5` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((num, den)) = body.split_once('/') {
        if !is_digits(num) || !is_digits(den) {
            return None;
        }
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Rational::new(num.parse().ok()?, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if !is_digits(whole) || !is_digits(frac) {
            return None;
        }
        let digits: BigInt = format!("{whole}{frac}").parse().ok()?;
        Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32))
    } else {
        if !is_digits(body) {
            return None;
        }
        Rational::from_integer(body.parse().ok()?)
    };
    Some(if neg { -value } else { value })
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Renders `q` as `p/q` (or `p` when integral).
pub fn to_fraction_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact decimal rendering when the denominator has only the prime factors
/// 2 and 5; otherwise `None`.
pub fn to_exact_decimal(q: &Rational) -> Option<String> {
    let mut den = q.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    if places == 0 {
        return Some(q.numer().to_string());
    }
    let scaled = q * Rational::from_integer(BigInt::from(10).pow(places));
    let digits = scaled.to_integer().abs().to_string();
    let padded = format!("{:0>width$}", digits, width = places as usize + 1);
    let (whole, frac) = padded.split_at(padded.len() - places as usize);
    let frac = frac.trim_end_matches('0');
    let sign = if q.is_negative() { "-" } else { "" };
    Some(if frac.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    })
}

/// Decimal when exact, fraction otherwise.
pub fn to_display_string(q: &Rational) -> String {
    to_exact_decimal(q).unwrap_or_else(|| to_fraction_string(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("-2.5"), Some(ratio(-5, 2)));
        assert_eq!(parse_rational("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("6/8"), Some(ratio(3, 4)));
        assert_eq!(parse_rational("17"), Some(int(17)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational(".5"), None);
        assert_eq!(parse_rational("1e3"), None);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_exact_decimal(&ratio(-1, 20)).unwrap(), "-0.05");
        assert_eq!(to_exact_decimal(&ratio(5, 2)).unwrap(), "2.5");
        assert_eq!(to_exact_decimal(&int(-3)).unwrap(), "-3");
        assert_eq!(to_exact_decimal(&ratio(1, 3)), None);
        assert_eq!(to_display_string(&ratio(1, 3)), "1/3");
    }
}
