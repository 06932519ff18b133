//! Exact score values and their fixed-point text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Scores are exact rationals; `None` stands for an undefined score.
pub type Score = BigRational;

/// Digits after the decimal point in every emitted score.
pub const DECIMAL_DIGITS: u32 = 6;

pub fn ratio(num: u64, den: u64) -> Score {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(score: &Score) -> f64 {
    score.to_f64().unwrap_or(f64::NAN)
}

/// Rounds half away from zero to `digits` fractional digits.
pub fn to_decimal(score: &Score, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let num: BigInt = score.numer().abs() * &scale * 2 + score.denom();
    let scaled: BigInt = num.div_floor(&(score.denom() * 2));
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if score.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int}");
    }
    format!("{sign}{int}.{frac:0>width$}", width = digits as usize)
}

pub fn format_score(score: Option<&Score>) -> String {
    match score {
        Some(s) => to_decimal(s, DECIMAL_DIGITS),
        None => "undefined".to_string(),
    }
}

/// Parses a plain decimal such as `0.666667` or `1` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Score> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let value = BigRational::new(num, den);
    Some(if neg { -value } else { value })
}

/// Parses a score cell: a decimal or the literal `undefined`.
pub fn parse_score(text: &str) -> Option<Option<Score>> {
    if text.trim() == "undefined" {
        return Some(None);
    }
    parse_decimal(text).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(to_decimal(&ratio(4, 6), 6), "0.666667");
        assert_eq!(to_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(to_decimal(&ratio(1, 1), 6), "1.000000");
        assert_eq!(to_decimal(&ratio(0, 5), 6), "0.000000");
        assert_eq!(to_decimal(&ratio(1, 8), 2), "0.13");
        assert_eq!(to_decimal(&ratio(1, 2_000_000), 6), "0.000001");
        assert_eq!(to_decimal(&-ratio(1, 4), 1), "-0.3");
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("0.5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("1"), Some(ratio(1, 1)));
        assert_eq!(parse_decimal(".25"), Some(ratio(1, 4)));
        assert_eq!(parse_decimal("abc"), None);
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_score("undefined"), Some(None));
        assert_eq!(
            parse_decimal(&to_decimal(&ratio(2, 3), 6)),
            Some(ratio(666_667, 1_000_000))
        );
    }
}
