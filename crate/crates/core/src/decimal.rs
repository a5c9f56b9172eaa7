//! Exact conversion between decimal text and big rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

fn malformed(token: &str, reason: &str) -> Error {
    Error::Malformed {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}

/// Parses `p/q`, a plain decimal (`0.73`, `.5`, `1.`) or a decimal with an
/// exponent (`7.3e-1`) into an exact rational. No range check is applied.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let token = text.trim();
    if token.is_empty() {
        return Err(malformed(text, "empty value"));
    }
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt =
            parse_integer(num.trim()).ok_or_else(|| malformed(token, "bad numerator"))?;
        let den: BigInt =
            parse_integer(den.trim()).ok_or_else(|| malformed(token, "bad denominator"))?;
        if den.is_zero() {
            return Err(malformed(token, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (negative, body) = match token.as_bytes()[0] {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = body[pos + 1..]
                .parse()
                .map_err(|_| malformed(token, "bad exponent"))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed(token, "no digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return Err(malformed(token, "not a decimal number"));
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(malformed(token, "exponent out of supported range"));
    }

    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| malformed(token, "bad digits"))?;
    if negative {
        numer = -numer;
    }
    let scale = frac_part.len() as i64 - exponent;
    let value = if scale >= 0 {
        BigRational::new(numer, pow10(scale as u32))
    } else {
        BigRational::from_integer(numer * pow10((-scale) as u32))
    };
    Ok(value)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix('+').unwrap_or(text);
    let unsigned = digits.strip_prefix('-').unwrap_or(digits);
    if unsigned.is_empty() || !unsigned.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

/// The exact decimal expansion of `value`, or `None` when it does not terminate.
pub fn exact_decimal(value: &BigRational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0u32, 0u32);
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
    let scale = twos.max(fives);
    let scaled = value * BigRational::from_integer(pow10(scale));
    Some(render_scaled(&scaled.to_integer(), scale))
}

/// Renders the integer `scaled / 10^scale` with trailing zeros trimmed.
fn render_scaled(scaled: &BigInt, scale: u32) -> String {
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let scale = scale as usize;
    let (int_part, frac_part) = if digits.len() > scale {
        let (i, f) = digits.split_at(digits.len() - scale);
        (i.to_string(), f.to_string())
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat(scale - digits.len()), digits),
        )
    };
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Rounds a non-negative value `num / den` to `sig` significant digits
/// (half-up) and renders it as a plain decimal.
fn round_significant(num: &BigInt, den: &BigInt, sig: u32) -> String {
    if num.is_zero() {
        return "0".to_string();
    }
    // Find k with 10^(sig-1) <= num * 10^k / den < 10^sig.
    let lower = pow10(sig - 1);
    let upper = pow10(sig);
    let mut k: i64 = sig as i64 - 1 - (num.to_string().len() as i64 - den.to_string().len() as i64);
    loop {
        let q = scaled_quotient(num, den, k);
        if q < lower {
            k += 1;
        } else if q >= upper {
            k -= 1;
        } else {
            break;
        }
    }
    // Half-up rounding on one extra digit.
    let extra = scaled_quotient(num, den, k + 1);
    let mut rounded = (extra + BigInt::from(5u32)) / BigInt::from(10u32);
    if rounded >= upper {
        rounded /= BigInt::from(10u32);
        k -= 1;
    }
    if k >= 0 {
        render_scaled(&rounded, k as u32)
    } else {
        render_scaled(&(rounded * pow10((-k) as u32)), 0)
    }
}

fn scaled_quotient(num: &BigInt, den: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        (num * pow10(k as u32)) / den
    } else {
        num / (den * pow10((-k) as u32))
    }
}

/// Decimal rendering of a non-negative rational to `sig` significant digits.
pub fn approx_decimal(value: &BigRational, sig: u32) -> String {
    round_significant(&value.numer().abs(), value.denom(), sig)
}

/// Decimal rendering of the square root of a non-negative rational to
/// `sig` significant digits; exact integer square roots drive the digits.
pub fn sqrt_decimal(value: &BigRational, sig: u32) -> String {
    assert!(!value.is_negative(), "square root of a negative value");
    if value.is_zero() {
        return "0".to_string();
    }
    // sqrt(p/q) = sqrt(p*q) / q; carry enough guard digits through isqrt.
    let radicand = value.numer() * value.denom();
    let guard = 2 * (sig + 4) + radicand.to_string().len() as u32;
    let root = (radicand * pow10(2 * guard)).sqrt();
    let den = value.denom() * pow10(guard);
    round_significant(&root, &den, sig)
}

/// Exact decimal when it terminates, otherwise `p/q`.
pub fn display_rational(value: &BigRational) -> String {
    exact_decimal(value).unwrap_or_else(|| format!("{}/{}", value.numer(), value.denom()))
}
