//! Simultaneous approximation points `(x, y, z)` with `1 <= x <= N`,
//! `|alpha x - y| <= N^(-1/2)` and `|beta x - z| <= N^(-1/2)`.

mod rotation;

pub use rotation::{min_hit, min_hit_offset, WindowWalk};

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::exact::num::{bitlen, ceil, floor_scaled, isqrt, pow2, qlt, rat_int, round_half_up};
use crate::exact::serde_num::RatStr;
use crate::exact::{nearest_int_distance, Enclosure, RealSpec};
use crate::precision::Precision;

/// Fractional bits of the fixed-point screen.
const SCREEN_BITS: u64 = 128;

/// Ranges up to this bound are scanned directly.
const SCAN_LIMIT: u64 = 1024;

/// Largest range bound the screened walk accepts.
pub const MAX_RANGE_BITS: u64 = 62;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirichletPoint {
    #[serde(rename = "N")]
    #[serde_as(as = "DisplayFromStr")]
    pub range: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub x: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub y: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub z: BigInt,
    /// `alpha x - y`
    pub res_alpha: Enclosure,
    /// `beta x - z`
    pub res_beta: Enclosure,
}

impl DirichletPoint {
    pub fn coords(&self) -> [BigInt; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    /// Residual enclosures recomputed at `bits` of precision.
    pub fn residuals_at(
        &self,
        alpha: &RealSpec,
        beta: &RealSpec,
        bits: u64,
    ) -> (Enclosure, Enclosure) {
        residuals(&self.x, &self.y, &self.z, alpha, beta, bits)
    }

    /// Signs of the two residuals when they are certified nonzero.
    pub fn residual_signs(&self) -> (Option<i8>, Option<i8>) {
        (self.res_alpha.signum(), self.res_beta.signum())
    }
}

fn residuals(
    x: &BigInt,
    y: &BigInt,
    z: &BigInt,
    alpha: &RealSpec,
    beta: &RealSpec,
    bits: u64,
) -> (Enclosure, Enclosure) {
    let xr = rat_int(x.clone());
    let ra = alpha
        .enclosure(bits)
        .scale(&xr)
        .add_rat(&-rat_int(y.clone()));
    let rb = beta
        .enclosure(bits)
        .scale(&xr)
        .add_rat(&-rat_int(z.clone()));
    (ra, rb)
}

/// Certified test of `||x v|| <= N^(-1/2)` as `res^2 N <= 1`. Returns the
/// nearest integer and the residual when it holds, `None` when it fails,
/// and an error when undecidable at this precision.
fn window_check(v: &Enclosure, x: &BigInt, n: &BigInt) -> Option<Option<(BigInt, Enclosure)>> {
    let xv = v.scale(&rat_int(x.clone()));
    let d = nearest_int_distance(&xv).ok()?;
    let test = d.square().scale(&rat_int(n.clone()));
    match test.cmp_rat(&BigRational::one()) {
        Some(Ordering::Greater) => Some(None),
        Some(_) => {
            let y = round_half_up(xv.lo());
            if round_half_up(xv.hi()) != y
                && qlt(
                    &BigRational::new(1.into(), 2.into()),
                    &(xv.hi() - rat_int(y.clone())),
                )
            {
                return None;
            }
            let res = xv.add_rat(&-rat_int(y.clone()));
            Some(Some((y, res)))
        }
        None => None,
    }
}

/// Certifies both windows at `x`, refining as needed.
fn certify(
    alpha: &RealSpec,
    beta: &RealSpec,
    x: &BigInt,
    n: &BigInt,
    prec: &Precision,
) -> Result<Option<DirichletPoint>> {
    let refinable = alpha.refinable() || beta.refinable();
    prec.with_start(prec.start_bits + 2 * bitlen(x) + bitlen(n))
        .refine(refinable, "dirichlet window check", |bits| {
            let a = match window_check(&alpha.enclosure(bits), x, n) {
                None => return Ok(None),
                Some(None) => return Ok(Some(None)),
                Some(Some(v)) => v,
            };
            let b = match window_check(&beta.enclosure(bits), x, n) {
                None => return Ok(None),
                Some(None) => return Ok(Some(None)),
                Some(Some(v)) => v,
            };
            Ok(Some(Some(DirichletPoint {
                range: n.clone(),
                x: x.clone(),
                y: a.0,
                z: b.0,
                res_alpha: a.1,
                res_beta: b.1,
            })))
        })
}

/// Fixed-point screen of `frac(v)`: returns `(a, t)` with
/// `frac(v) 2^128 in [a, a + t)` modulo `2^128`.
fn screen(v: &RealSpec) -> Result<(u128, u128)> {
    let e = v.enclosure(SCREEN_BITS + 8);
    let m = pow2(SCREEN_BITS);
    let lo = floor_scaled(e.lo(), SCREEN_BITS);
    let hi = ceil(&(e.hi() * rat_int(m.clone())));
    let t = (&hi - &lo + 1u32)
        .to_u128()
        .filter(|&t| t < 1 << 60)
        .ok_or_else(|| {
            Error::PrecisionExhausted("literal too coarse for the screened search".into())
        })?;
    let a = num_integer::Integer::mod_floor(&lo, &m)
        .to_u128()
        .expect("reduced modulo 2^128");
    Ok((a, t))
}

/// Smallest `x` in `[1, N]` at which both `alpha` and `beta` lie within
/// `N^(-1/2)` of an integer, with certified residuals.
///
/// Candidates come from a 128-bit fixed-point screen walked by return
/// times (at most three distinct gaps), and each candidate is then
/// certified exactly. The screen only ever widens the windows, so no
/// qualifying `x` is skipped.
pub fn find_dirichlet_point(
    alpha: &RealSpec,
    beta: &RealSpec,
    range: &BigInt,
    prec: &Precision,
) -> Result<DirichletPoint> {
    if range < &BigInt::one() {
        return Err(Error::InvalidArgument(
            "range bound must be at least 1".into(),
        ));
    }
    if bitlen(range) > MAX_RANGE_BITS {
        return Err(Error::InvalidArgument(format!(
            "range bound {range} exceeds 2^{MAX_RANGE_BITS}"
        )));
    }
    if range <= &BigInt::from(SCAN_LIMIT) {
        let n = range.to_u64().expect("small");
        return first_in_range(alpha, beta, range, 1, n, prec)?.ok_or_else(|| {
            Error::Undecidable(format!("no simultaneous approximation found up to {n}"))
        });
    }
    let n = range.to_u128().expect("checked above");
    let (a, ta) = screen(alpha)?;
    let (b, tb) = screen(beta)?;
    // window half-width in screen units, rounded up: 2^128 / isqrt(N) + 1
    let half = (pow2(SCREEN_BITS) / isqrt(range) + 1u32)
        .to_u128()
        .expect("fits");
    let slack = |t: u128| half + n * t + 1;
    let (ca, cb) = (slack(ta), slack(tb));
    let (wa, wb) = (2 * ca, 2 * cb);
    if wa >= 1 << 126 || wb >= 1 << 126 {
        return Err(Error::PrecisionExhausted("screen window too wide".into()));
    }
    for x in WindowWalk::new(a, ca, wa) {
        if x > n {
            break;
        }
        if b.wrapping_mul(x).wrapping_add(cb) > wb {
            continue;
        }
        if let Some(pt) = certify(alpha, beta, &BigInt::from(x), range, prec)? {
            return Ok(pt);
        }
    }
    Err(Error::Undecidable(format!(
        "no simultaneous approximation found up to {range}"
    )))
}

/// First `x` in `[lo, hi]` passing both windows for the bound `N`, by a
/// plain scan. Used for small ranges and as a reference.
pub fn first_in_range(
    alpha: &RealSpec,
    beta: &RealSpec,
    range: &BigInt,
    lo: u64,
    hi: u64,
    prec: &Precision,
) -> Result<Option<DirichletPoint>> {
    for x in lo.max(1)..=hi {
        if let Some(pt) = certify(alpha, beta, &BigInt::from(x), range, prec)? {
            return Ok(Some(pt));
        }
    }
    Ok(None)
}

/// Position of a point relative to the small-value domain `|f| <= epsilon`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    ImmediateWitness {
        f_value: Enclosure,
    },
    Outside {
        f_value: Enclosure,
        /// `epsilon N <= x <= N`
        bound_holds: bool,
        #[serde_as(as = "RatStr")]
        lower_bound: BigRational,
    },
}

/// Decides whether `|f(x, y, z)| <= epsilon` at the point.
pub fn classify_point(
    pt: &DirichletPoint,
    alpha: &RealSpec,
    beta: &RealSpec,
    epsilon: &BigRational,
    prec: &Precision,
) -> Result<Classification> {
    let refinable = alpha.refinable() || beta.refinable();
    let xr = rat_int(pt.x.clone());
    let f = prec
        .with_start(prec.start_bits + 2 * bitlen(&pt.x))
        .refine(refinable, "classification", |bits| {
            let (ra, rb) = pt.residuals_at(alpha, beta, bits);
            let f = (&ra * &rb).scale(&xr);
            Ok(f.abs().cmp_rat(epsilon).map(|o| (f, o)))
        })
        .map_err(|_| {
            Error::Undecidable(format!("|f| against epsilon {epsilon} at x = {}", pt.x))
        })?;
    Ok(match f.1 {
        Ordering::Greater => {
            let lower_bound = epsilon * rat_int(pt.range.clone());
            Classification::Outside {
                f_value: f.0,
                bound_holds: lower_bound <= xr && pt.x <= pt.range,
                lower_bound,
            }
        }
        _ => Classification::ImmediateWitness { f_value: f.0 },
    })
}

/// Certified test of `C / x < |alpha x - y|` and `C / x < |beta x - z|`.
pub fn badness_check(
    pt: &DirichletPoint,
    alpha: &RealSpec,
    beta: &RealSpec,
    c: &BigRational,
    prec: &Precision,
) -> Result<bool> {
    if !c.is_positive() {
        return Ok(true);
    }
    let bound = c / rat_int(pt.x.clone());
    let refinable = alpha.refinable() || beta.refinable();
    prec.with_start(prec.start_bits + 2 * bitlen(&pt.x))
        .refine(refinable, "badness check", |bits| {
            let (ra, rb) = pt.residuals_at(alpha, beta, bits);
            match (ra.abs().cmp_rat(&bound), rb.abs().cmp_rat(&bound)) {
                (Some(oa), Some(ob)) => {
                    Ok(Some(oa == Ordering::Greater && ob == Ordering::Greater))
                }
                (Some(Ordering::Less | Ordering::Equal), _)
                | (_, Some(Ordering::Less | Ordering::Equal)) => Ok(Some(false)),
                _ => Ok(None),
            }
        })
        .map_err(|_| Error::Undecidable(format!("badness bound {c} at x = {}", pt.x)))
}
