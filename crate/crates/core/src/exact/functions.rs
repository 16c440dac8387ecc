//! Enclosures of the few irrational functions the toolkit needs: square and
//! integer roots, rational powers, natural logarithms and Euler's number.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::enclosure::Enclosure;
use super::num::{bits_for_width, ceil_scaled, dyadic, floor_scaled, pow2, rat, rat_int};

/// Enclosure of `sqrt(d)` of width at most `width` (exact for perfect squares).
pub fn sqrt_enclosure(d: &BigInt, width: &BigRational) -> Enclosure {
    assert!(!d.is_negative(), "sqrt_enclosure of a negative integer");
    assert!(width.is_positive(), "width must be positive");
    let k = bits_for_width(width);
    Enclosure::point(rat_int(d.clone()))
        .sqrt(k)
        .expect("non-negative input")
}

/// Enclosure of `q^(1/r)` for `q >= 0` on a `2^-bits` grid.
pub fn root_enclosure(q: &BigRational, r: u32, bits: u64) -> Enclosure {
    assert!(!q.is_negative() && r >= 1);
    if r == 1 {
        return Enclosure::point(q.clone());
    }
    let scaled_lo = floor_scaled(q, bits * r as u64);
    let lo = scaled_lo.nth_root(r);
    let exact = {
        let num = q.numer() << (bits * r as u64);
        num_traits::pow(lo.clone(), r as usize) * q.denom() == num
    };
    let hi = if exact {
        lo.clone()
    } else {
        &lo + BigInt::one()
    };
    Enclosure::from_scaled(lo, hi, bits)
}

/// Enclosure of `base^exp` for rational `base > 0` and rational `exp`.
pub fn pow_rational(base: &BigRational, exp: &BigRational, bits: u64) -> Enclosure {
    assert!(base.is_positive(), "pow_rational needs a positive base");
    let p = exp
        .numer()
        .abs()
        .to_u32()
        .expect("exponent numerator too large");
    let r = exp
        .denom()
        .to_u32()
        .expect("exponent denominator too large");
    let powered = num_traits::pow(base.clone(), p as usize);
    if !exp.is_negative() {
        return root_enclosure(&powered, r, bits);
    }
    let mut k = bits;
    loop {
        let e = root_enclosure(&powered, r, k);
        if let Some(inv) = e.recip() {
            return inv;
        }
        k += 16;
    }
}

/// Monotone extension of [`pow_rational`] to an enclosure with positive
/// lower bound and `exp >= 0`.
pub fn pow_rational_enc(x: &Enclosure, exp: &BigRational, bits: u64) -> Enclosure {
    assert!(!exp.is_negative());
    let lo = if x.lo().is_zero() {
        BigRational::zero()
    } else {
        pow_rational(x.lo(), exp, bits).lo().clone()
    };
    let hi = pow_rational(x.hi(), exp, bits).hi().clone();
    Enclosure::new(lo, hi)
}

/// Lower and upper fixed-point bounds (scale `2^p`) of `atanh(z)` for
/// `0 <= z_lo <= z_hi < 1/2` given as scaled integers.
fn atanh_scaled(z_lo: &BigInt, z_hi: &BigInt, p: u64) -> (BigInt, BigInt) {
    let one = pow2(p);
    // lower bound: every rounding goes down, terms are positive
    let mut lower = BigInt::zero();
    {
        let z2 = (z_lo * z_lo) >> p;
        let mut pw = z_lo.clone();
        let mut j = 0u64;
        while !pw.is_zero() {
            lower += &pw / BigInt::from(2 * j + 1);
            pw = (&pw * &z2) >> p;
            j += 1;
        }
    }
    // upper bound: every rounding goes up, geometric tail added at the end
    let mut upper = BigInt::zero();
    {
        let z2 = ((z_hi * z_hi) + &one - BigInt::one()) >> p;
        let mut pw = z_hi.clone();
        let mut j = 0u64;
        loop {
            let d = BigInt::from(2 * j + 1);
            upper += (&pw + &d - BigInt::one()) / &d;
            pw = ((&pw * &z2) + &one - BigInt::one()) >> p;
            j += 1;
            if pw <= BigInt::from(2) {
                // tail <= pw * sum z^(2i) <= pw / (1 - z^2) <= 4/3 pw
                upper += &pw * 2 + 1;
                break;
            }
        }
    }
    (lower, upper)
}

/// `2 atanh(z)` for rational `z` in `[0, 1/2)`, as scaled bounds.
fn two_atanh(z: &BigRational, p: u64) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_scaled(&floor_scaled(z, p), &ceil_scaled(z, p), p);
    (lo * 2, hi * 2)
}

/// Enclosure of `ln(x)` for rational `x > 0`, width about `2^-bits`.
pub fn ln_enclosure(x: &BigRational, bits: u64) -> Enclosure {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Enclosure::zero();
    }
    // x = 2^e * m with m in [1, 2)
    let mut e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = rat(2, 1);
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            rat_int(pow2(e as u64))
        } else {
            BigRational::new(BigInt::one(), pow2((-e) as u64))
        }
    };
    let mut m = x / pow(e);
    while m >= two {
        e += 1;
        m = x / pow(e);
    }
    while m < BigRational::one() {
        e -= 1;
        m = x / pow(e);
    }
    let ebits = (e.unsigned_abs().max(1) as f64).log2().ceil() as u64 + 1;
    let p = bits + 8 + ebits;
    let z = (&m - BigRational::one()) / (&m + BigRational::one());
    let (lm_lo, lm_hi) = two_atanh(&z, p);
    let (mut lo, mut hi) = (lm_lo, lm_hi);
    if e != 0 {
        let (l2_lo, l2_hi) = two_atanh(&rat(1, 3), p);
        let eb = BigInt::from(e);
        if e > 0 {
            lo += &eb * l2_lo;
            hi += &eb * l2_hi;
        } else {
            lo += &eb * l2_hi;
            hi += &eb * l2_lo;
        }
    }
    Enclosure::new(dyadic(lo, p), dyadic(hi, p))
}

/// Natural logarithm of a positive integer.
pub fn ln_int(v: &BigInt, bits: u64) -> Enclosure {
    ln_enclosure(&rat_int(v.clone()), bits)
}

/// Euler's number to within `2^-bits`.
pub fn euler_enclosure(bits: u64) -> Enclosure {
    let target = pow2(bits + 1);
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    let mut k = 0u64;
    loop {
        sum += BigRational::new(BigInt::one(), fact.clone());
        k += 1;
        fact *= BigInt::from(k);
        if fact > target {
            break;
        }
    }
    // remaining tail sum_{j>=k} 1/j! < 2/k!
    let tail = BigRational::new(BigInt::from(2), fact);
    Enclosure::new(sum.clone(), sum + tail)
}
