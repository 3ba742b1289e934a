use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussianRational;
use super::NumericError;

fn err(input: &str, offset: usize, msg: &str) -> NumericError {
    NumericError::Parse { input: input.to_string(), offset, msg: msg.to_string() }
}

/// Parses an exact Gaussian rational such as `-1/2`, `3/4i`, `i/2`,
/// `1/2+3/4i` or `0/1+1/2i`. Decimal points are rejected.
pub fn parse_gaussian(s: &str) -> Result<GaussianRational, NumericError> {
    parse_complex(s, false)
}

/// Like [`parse_gaussian`] but also accepts decimals and scientific
/// notation (`0.5+0.6i`, `1e-6`), converted exactly.
pub fn parse_gaussian_decimal(s: &str) -> Result<GaussianRational, NumericError> {
    parse_complex(s, true)
}

/// A real rational: integer, fraction or (when allowed) decimal.
pub fn parse_rational(s: &str, allow_decimal: bool) -> Result<BigRational, NumericError> {
    let z = parse_complex(s, allow_decimal)?;
    if !z.im.is_zero() {
        return Err(err(s, 0, "expected a real number"));
    }
    Ok(z.re)
}

fn parse_complex(s: &str, allow_decimal: bool) -> Result<GaussianRational, NumericError> {
    let bytes = s.as_bytes();
    if s.trim().is_empty() {
        return Err(err(s, 0, "empty number"));
    }
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    // split into signed terms; a sign directly after an exponent marker
    // belongs to the exponent
    let mut terms: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for (k, &c) in bytes.iter().enumerate() {
        if (c == b'+' || c == b'-') && k > start {
            let prev = bytes[k - 1];
            if prev == b'e' || prev == b'E' || prev == b'+' || prev == b'-' {
                continue;
            }
            terms.push((start, k));
            start = k;
        }
    }
    terms.push((start, bytes.len()));
    for (a, b) in terms {
        let raw = &s[a..b];
        let lead_ws = raw.len() - raw.trim_start().len();
        let t = raw.trim();
        let off = a + lead_ws;
        if t.is_empty() {
            return Err(err(s, off, "empty term"));
        }
        let (neg, body, body_off) = match t.as_bytes()[0] {
            b'-' => (true, t[1..].trim_start(), off + 1),
            b'+' => (false, t[1..].trim_start(), off + 1),
            _ => (false, t, off),
        };
        if body.is_empty() {
            return Err(err(s, body_off, "missing number after sign"));
        }
        let (value, imaginary) = match body.find('i') {
            None => (parse_real_literal(s, body, body_off, allow_decimal)?, false),
            Some(k) => {
                let left = &body[..k];
                let right = &body[k + 1..];
                let coef = if left.is_empty() {
                    BigRational::one()
                } else {
                    parse_real_literal(s, left, body_off, allow_decimal)?
                };
                let coef = if right.is_empty() {
                    coef
                } else if let Some(d) = right.strip_prefix('/') {
                    let den = parse_int(s, d, body_off + k + 2)?;
                    if den.is_zero() {
                        return Err(err(s, body_off + k + 2, "zero denominator"));
                    }
                    coef / BigRational::from_integer(den)
                } else {
                    return Err(err(s, body_off + k + 1, "unexpected characters after 'i'"));
                };
                (coef, true)
            }
        };
        let value = if neg { -value } else { value };
        if imaginary {
            im += value;
        } else {
            re += value;
        }
    }
    Ok(GaussianRational::new(re, im))
}

fn parse_int(full: &str, t: &str, off: usize) -> Result<BigInt, NumericError> {
    if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
        return Err(err(full, off, "expected digits"));
    }
    t.parse::<BigInt>().map_err(|_| err(full, off, "bad integer"))
}

fn parse_real_literal(
    full: &str,
    t: &str,
    off: usize,
    allow_decimal: bool,
) -> Result<BigRational, NumericError> {
    if let Some(k) = t.find('/') {
        let n = parse_int(full, &t[..k], off)?;
        let d = parse_int(full, &t[k + 1..], off + k + 1)?;
        if d.is_zero() {
            return Err(err(full, off + k + 1, "zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    let is_decimal = t.contains('.') || t.contains('e') || t.contains('E');
    if !is_decimal {
        return Ok(BigRational::from_integer(parse_int(full, t, off)?));
    }
    if !allow_decimal {
        return Err(err(full, off, "decimals need float mode; write an exact fraction"));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(k) => {
            let e = &t[k + 1..];
            let (eneg, edigits) = match e.as_bytes().first() {
                Some(b'-') => (true, &e[1..]),
                Some(b'+') => (false, &e[1..]),
                _ => (false, e),
            };
            let ev: i64 = parse_int(full, edigits, off + k + 1)?
                .try_into()
                .map_err(|_| err(full, off + k + 1, "exponent too large"))?;
            (&t[..k], if eneg { -ev } else { ev })
        }
        None => (t, 0),
    };
    let (ip, fp) = match mant.find('.') {
        Some(k) => (&mant[..k], &mant[k + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(err(full, off, "expected digits"));
    }
    let digits = format!("{}{}", ip, fp);
    let n = parse_int(full, &digits, off)?;
    let e10 = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let r = if e10 >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, e10 as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-e10) as usize))
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let z = parse_gaussian("1/2+3/4i").unwrap();
        assert_eq!((z.re, z.im), (q(1, 2), q(3, 4)));
        let z = parse_gaussian("3i/4").unwrap();
        assert_eq!((z.re, z.im), (q(0, 1), q(3, 4)));
        let z = parse_gaussian("-i").unwrap();
        assert_eq!(z.im, q(-1, 1));
        let z = parse_gaussian("1/2+0/1i").unwrap();
        assert!(z.is_real());
        let z = parse_gaussian_decimal("0.5+0.6i").unwrap();
        assert_eq!((z.re, z.im), (q(1, 2), q(3, 5)));
        assert_eq!(parse_rational("1e-6", true).unwrap(), q(1, 1_000_000));
        assert_eq!(parse_rational("2.5E+1", true).unwrap(), q(25, 1));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_gaussian("1/2+x") {
            Err(NumericError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{:?}", other),
        }
        assert!(parse_gaussian("0.5").is_err());
        assert!(parse_gaussian("").is_err());
        assert!(parse_gaussian("1/0").is_err());
    }
}
