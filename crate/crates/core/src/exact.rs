//! Rational scalars, parsing and decimal rendering.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn pow10(k: u32) -> BigInt {
    num::pow(BigInt::from(10), k as usize)
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parse "p/q", an integer, or a base-10 decimal such as "-2.5e-3" exactly.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let mut v = Rat::from_integer(digits);
    if scale >= 0 {
        v *= Rat::from_integer(pow10(scale as u32));
    } else {
        v /= Rat::from_integer(pow10((-scale) as u32));
    }
    Ok(if neg { -v } else { v })
}

/// Fixed-point rendering with `frac` digits after the point, rounded half away from zero.
pub fn decimal(r: &Rat, frac: usize) -> String {
    let scaled = r * Rat::from_integer(pow10(frac as u32));
    let rounded = scaled.abs().round().to_integer();
    let s = rounded.to_string();
    let s = if s.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - s.len()), s)
    } else {
        s
    };
    let (i, f) = s.split_at(s.len() - frac);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{i}")
    } else {
        format!("{sign}{i}.{f}")
    }
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(n.sign() != Sign::Minus);
    n.sqrt()
}

/// Exact square root when `r` is the square of a rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (isqrt(n), isqrt(d));
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rat::new(sn, sd))
}

/// Smallest k with 10^-k <= tol; used to pick how many digits to print.
pub fn digits_for(tol: &Rat) -> usize {
    let mut k = 0usize;
    let mut t = Rat::one();
    while &t > tol && k < 400 {
        t /= int(10);
        k += 1;
    }
    k
}

/// Root-refinement tolerance, honouring `CALABI_PRECISION`.
///
/// The variable may hold a digit count ("40") or a tolerance ("1e-40", "1/1000").
pub fn tolerance_from_env() -> Result<Rat> {
    match std::env::var("CALABI_PRECISION") {
        Ok(v) => parse_tolerance(&v),
        Err(_) => Ok(default_tolerance()),
    }
}

pub fn default_tolerance() -> Rat {
    Rat::new(BigInt::one(), pow10(30))
}

pub fn parse_tolerance(v: &str) -> Result<Rat> {
    let v = v.trim();
    if let Ok(k) = v.parse::<u32>() {
        if k == 0 || k > 1000 {
            return Err(Error::Parameter(format!("precision digits out of range: {k}")));
        }
        return Ok(Rat::new(BigInt::one(), pow10(k)));
    }
    let t = parse_rat(v)?;
    if !t.is_positive() || t >= Rat::one() {
        return Err(Error::Parameter(format!("tolerance must lie in (0, 1): {v}")));
    }
    Ok(t)
}
