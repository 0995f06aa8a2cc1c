//! Exact conversion between decimal literals and rationals.
//!
//! Every number that enters the planner (scenario files, CLI flags) is a
//! decimal literal; it is converted to a [`BigRational`] without rounding so
//! that all downstream arithmetic stays exact.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("empty number literal")]
    Empty,
    #[error("invalid number literal `{0}`")]
    Invalid(String),
    #[error("number literal `{literal}` has {got} fractional digits (at most {max} allowed)")]
    TooManyFractionDigits {
        literal: String,
        got: usize,
        max: usize,
    },
}

/// Parses `[+-]digits[.digits][e[+-]digits]` into an exact rational.
///
/// Scientific notation is exact too: `1e-2` becomes 1/100.
pub fn parse_decimal(input: &str) -> Result<BigRational, DecimalError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(DecimalError::Empty);
    }
    let bad = || DecimalError::Invalid(input.to_string());

    let (sign, rest) = match s.as_bytes()[0] {
        b'+' => (1, &s[1..]),
        b'-' => (-1, &s[1..]),
        _ => (1, s),
    };
    let (mantissa, exponent) = match rest.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = rest[pos + 1..].parse().map_err(|_| bad())?;
            (&rest[..pos], exp)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }

    let digits: String = format!("{int_part}{frac_part}");
    let unsigned = digits.parse::<BigUint>().map_err(|_| bad())?;
    let mut numer = BigInt::from(unsigned);
    if sign < 0 {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(numer * ten.pow(shift as u32))
    } else {
        BigRational::new(numer, ten.pow((-shift) as u32))
    })
}

/// Counts fractional digits of a plain decimal literal (no exponent).
///
/// Returns `None` when the literal uses scientific notation.
pub fn fraction_digits(literal: &str) -> Option<usize> {
    if literal.contains(['e', 'E']) {
        return None;
    }
    Some(match literal.find('.') {
        Some(pos) => literal.len() - pos - 1,
        None => 0,
    })
}

/// Formats a rational as an exact decimal string, if its denominator is of
/// the form 2^a·5^b. Returns `None` otherwise.
pub fn format_exact(value: &BigRational) -> Option<String> {
    let mut den = value.denom().magnitude().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigUint::from(2u32);
    let five = BigUint::from(5u32);
    while (&den % &two).is_zero() {
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
    // Rescale so the denominator becomes 10^places exactly.
    let numer = value.numer() * BigInt::from(2u32).pow(places - twos) * BigInt::from(5u32).pow(places - fives);
    let negative = numer.is_negative();
    let digits = numer.magnitude().to_string();
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return Some(out);
    }
    let places = places as usize;
    if digits.len() <= places {
        out.push_str("0.");
        out.push_str(&"0".repeat(places - digits.len()));
        out.push_str(&digits);
    } else {
        let split = digits.len() - places;
        out.push_str(&digits[..split]);
        out.push('.');
        out.push_str(&digits[split..]);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_integers_and_decimals() {
        assert_eq!(parse_decimal("25").unwrap(), rat(25, 1));
        assert_eq!(parse_decimal("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_decimal("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_decimal("0.123456").unwrap(), rat(123456, 1_000_000));
    }

    #[test]
    fn parses_scientific_notation_exactly() {
        assert_eq!(parse_decimal("1e-2").unwrap(), rat(1, 100));
        assert_eq!(parse_decimal("1e-4").unwrap(), rat(1, 10_000));
        assert_eq!(parse_decimal("2.5e1").unwrap(), rat(25, 1));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("1e").is_err());
    }

    #[test]
    fn counts_fraction_digits() {
        assert_eq!(fraction_digits("2.5"), Some(1));
        assert_eq!(fraction_digits("10"), Some(0));
        assert_eq!(fraction_digits("0.123456"), Some(6));
        assert_eq!(fraction_digits("1e-2"), None);
    }

    #[test]
    fn formats_decimal_denominators() {
        assert_eq!(format_exact(&rat(5, 2)).unwrap(), "2.5");
        assert_eq!(format_exact(&rat(-1, 100)).unwrap(), "-0.01");
        assert_eq!(format_exact(&rat(40, 1)).unwrap(), "40");
        assert_eq!(format_exact(&rat(1, 3)), None);
    }

    #[test]
    fn parse_format_round_trip() {
        for s in ["0.5", "2.5", "40", "-0.01", "0.123456"] {
            assert_eq!(format_exact(&parse_decimal(s).unwrap()).unwrap(), s);
        }
    }
}
