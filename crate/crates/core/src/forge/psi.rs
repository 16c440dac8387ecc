use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exact::num::{bits_for_width, qle, rat};
use crate::exact::{ln_enclosure, Enclosure};
use crate::pipeline::gamma_threshold;

/// `ln(x - 1) / ln(x)` for rational `x > 1`, to width at most `width`.
pub fn psi(x: &BigRational, width: &BigRational) -> Result<Enclosure> {
    if x <= &BigRational::one() {
        return Err(Error::InvalidArgument(format!("psi needs x > 1, got {x}")));
    }
    if !width.is_positive() {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    let xm1 = x - BigRational::one();
    let mut bits = bits_for_width(width) + 16;
    loop {
        let num = ln_enclosure(&xm1, bits);
        if num.is_point() {
            return Ok(num);
        }
        if let Some(v) = num.checked_div(&ln_enclosure(x, bits)) {
            if qle(&v.width(), width) {
                return Ok(v);
            }
        }
        bits *= 2;
        if bits > 1 << 16 {
            return Err(Error::PrecisionExhausted("psi".into()));
        }
    }
}

fn check_eta(eta: &BigRational) -> Result<()> {
    if eta.is_negative() || eta * rat(3, 1) >= BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "eta = {eta} outside [0, 1/3)"
        )));
    }
    Ok(())
}

/// The `b > 2` with `psi(b) = 11/12 + eta/4`, enclosed to width `tol` by
/// bisection on the increasing function `psi`.
pub fn critical_b(eta: &BigRational, tol: &BigRational) -> Result<Enclosure> {
    check_eta(eta)?;
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let target = gamma_threshold(eta);
    let probe = |x: &BigRational, w: &BigRational| -> Result<Ordering> {
        let mut w = w.clone();
        for _ in 0..8 {
            if let Some(o) = psi(x, &w)?.cmp_rat(&target) {
                return Ok(o);
            }
            w = &w * &w;
        }
        Err(Error::Undecidable(format!("psi({x}) against {target}")))
    };
    let fine = tol * rat(1, 1 << 20);
    let mut lo = rat(2, 1);
    let mut hi = rat(4, 1);
    while probe(&hi, &fine)? != Ordering::Greater {
        lo = hi.clone();
        hi = &hi * rat(2, 1);
    }
    while !qle(&(&hi - &lo), tol) {
        let mid = (&lo + &hi) * rat(1, 2);
        match probe(&mid, &fine)? {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => return Ok(Enclosure::point(mid)),
        }
    }
    Ok(Enclosure::new(lo, hi))
}

/// Whether some integer `a` satisfies `b^(11/12 + eta/4) <= a < b`,
/// decided as `(b - 1)^q >= b^p` for the exponent `p/q`.
///
/// The right end is open: `b` itself always lies above `b^mu`.
pub fn window_has_integer(b: &BigInt, eta: &BigRational) -> Result<bool> {
    check_eta(eta)?;
    if b < &BigInt::from(2) {
        return Err(Error::InvalidArgument("b must be at least 2".into()));
    }
    let mu = gamma_threshold(eta);
    let p = mu
        .numer()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("eta too fine".into()))?;
    let q = mu
        .denom()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("eta too fine".into()))?;
    Ok(num_traits::pow(b - 1, q) >= num_traits::pow(b.clone(), p))
}

/// [`critical_b`] at float precision for table output.
pub fn critical_b_f64(eta: &BigRational) -> Result<f64> {
    Ok(critical_b(eta, &rat(1, 1_000_000_000))?.to_f64())
}
