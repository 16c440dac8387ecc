//! Small helpers over `BigInt` / `BigRational` used throughout the crate.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

pub fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `num / 2^k` in lowest terms.
pub fn dyadic(num: BigInt, k: u64) -> BigRational {
    BigRational::new(num, pow2(k))
}

pub fn floor(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// Nearest integer, halves rounded up.
pub fn round_half_up(q: &BigRational) -> BigInt {
    floor(&(q + rat(1, 2)))
}

/// `floor(q * 2^k)`.
pub fn floor_scaled(q: &BigRational, k: u64) -> BigInt {
    (q.numer() << k).div_floor(q.denom())
}

/// `ceil(q * 2^k)`.
pub fn ceil_scaled(q: &BigRational, k: u64) -> BigInt {
    -((-(q.numer() << k)).div_floor(q.denom()))
}

/// Smallest `k >= 0` with `2^-k <= width`; `width` must be positive.
pub fn bits_for_width(width: &BigRational) -> u64 {
    assert!(width.is_positive(), "width must be positive");
    let num_bits = width.numer().bits() as i64;
    let den_bits = width.denom().bits() as i64;
    let mut k = (den_bits - num_bits).max(0) as u64;
    while rat_int(pow2(k)) * width < BigRational::one() {
        k += 1;
    }
    k
}

/// Bit length of `|v|`, at least 1.
pub fn bitlen(v: &BigInt) -> u64 {
    v.bits().max(1)
}

/// `floor(sqrt(v))` for `v >= 0`.
pub fn isqrt(v: &BigInt) -> BigInt {
    assert!(!v.is_negative(), "isqrt of a negative integer");
    v.sqrt()
}

pub fn is_perfect_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let s = v.sqrt();
    &s * &s == *v
}

/// Exact square root of a rational when it is a perfect square.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if is_perfect_square(n) && is_perfect_square(d) {
        Some(BigRational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
    }
    m * 2f64.powi(e as i32)
}

/// Approximate value as `f64`. Heuristic use only.
pub fn to_f64(q: &BigRational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    if n.is_zero() {
        return 0.0;
    }
    let shift = 64 - (n.bits() as i64 - d.bits() as i64);
    let scaled = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    ldexp(scaled.to_f64().unwrap_or(f64::NAN), -shift)
}

/// Approximates an `f64` by a dyadic rational (exact for finite inputs).
pub fn from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// Decimal rendering rounded to `digits` fractional digits.
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (q.abs() * rat_int(scale.clone())).round().to_integer();
    let (ip, fp) = scaled.div_rem(&scale);
    let sign = if q.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

/// Parses `"-12.5e-3"`, `"7"`, or `"p/q"` into an exact rational.
///
/// Also returns the number of fractional decimal digits written (zero for
/// the `p/q` form), which callers use to size truncation radii.
pub fn parse_decimal(s: &str) -> Result<(BigRational, u32)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok((BigRational::new(n, d), 0));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = fp.len() as i32 - exp;
    let ten = BigInt::from(10u32);
    let mut v = if scale >= 0 {
        BigRational::new(digits, ten.pow(scale as u32))
    } else {
        rat_int(digits * ten.pow((-scale) as u32))
    };
    if neg {
        v = -v;
    }
    Ok((v, scale.max(0) as u32))
}

pub fn sign_of(v: &BigInt) -> Sign {
    v.sign()
}

/// Total order on rationals by cross-multiplication.
///
/// `num_rational`'s own `Ord` recurses once per shared continued-fraction
/// term, which overflows the stack on close high-precision values.
pub fn qcmp(a: &BigRational, b: &BigRational) -> std::cmp::Ordering {
    if a.denom() == b.denom() {
        return a.numer().cmp(b.numer());
    }
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// Equality of normalized rationals, without `num_rational`'s comparison.
pub fn qeq(a: &BigRational, b: &BigRational) -> bool {
    a.numer() == b.numer() && a.denom() == b.denom()
}

pub fn qle(a: &BigRational, b: &BigRational) -> bool {
    qcmp(a, b) != std::cmp::Ordering::Greater
}

pub fn qlt(a: &BigRational, b: &BigRational) -> bool {
    qcmp(a, b) == std::cmp::Ordering::Less
}

pub fn qmin<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if qle(a, b) {
        a
    } else {
        b
    }
}

pub fn qmax<'a>(a: &'a BigRational, b: &'a BigRational) -> &'a BigRational {
    if qle(a, b) {
        b
    } else {
        a
    }
}
