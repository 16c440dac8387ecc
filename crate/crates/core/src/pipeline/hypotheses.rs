use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::exact::num::{bitlen, floor, qeq, qle, rat, rat_int};
use crate::exact::serde_num::RatStr;
use crate::exact::{ln_int, Enclosure};

/// Bits of the log enclosures used for `gamma` and `eta_min`.
const LOG_BITS: u64 = 96;

/// Exact comparisons are used while `base^p` and `target^q` stay below
/// this many bits.
const EXACT_POWER_BITS: u64 = 1 << 24;

/// `11/12 + eta/4`, the least admissible `gamma`.
pub fn gamma_threshold(eta: &BigRational) -> BigRational {
    rat(11, 12) + eta * rat(1, 4)
}

/// Certified `base^exp <= target` for integers `base >= 2`, `target >= 1`
/// and rational `exp >= 0`.
///
/// With `exp = p/q` this is `base^p <= target^q`, decided on integers when
/// the powers are of reasonable size and through logarithm enclosures
/// otherwise.
pub fn power_le(base: &BigInt, exp: &BigRational, target: &BigInt) -> Result<bool> {
    if base < &BigInt::from(2) || !target.is_positive() || exp.is_negative() {
        return Err(Error::InvalidArgument(
            "power_le needs base >= 2, target >= 1, exp >= 0".into(),
        ));
    }
    let (p, q) = (exp.numer(), exp.denom());
    let cost = |b: &BigInt, e: &BigInt| e.to_u64().map(|e| e.saturating_mul(bitlen(b)));
    if let (Some(cp), Some(cq)) = (cost(base, p), cost(target, q)) {
        if cp <= EXACT_POWER_BITS && cq <= EXACT_POWER_BITS {
            let lhs = num_traits::pow(base.clone(), p.to_usize().unwrap());
            let rhs = num_traits::pow(target.clone(), q.to_usize().unwrap());
            return Ok(lhs <= rhs);
        }
    }
    let mut bits = 64;
    while bits <= 1 << 14 {
        let lhs = ln_int(base, bits).scale(exp);
        match lhs.cmp_enc(&ln_int(target, bits)) {
            Some(Ordering::Greater) => return Ok(false),
            Some(_) => return Ok(true),
            None => bits *= 2,
        }
    }
    Err(Error::Undecidable(format!("{base}^{exp} against {target}")))
}

/// `floor(base^exp)` for a rational exponent, by integer root extraction.
pub fn floor_power(base: &BigInt, exp: &BigRational) -> Result<BigInt> {
    if !base.is_positive() || exp.is_negative() {
        return Err(Error::InvalidArgument(
            "floor_power needs base > 0 and exp >= 0".into(),
        ));
    }
    let p = exp
        .numer()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("exponent too large".into()))?;
    let q = exp
        .denom()
        .to_u32()
        .ok_or_else(|| Error::InvalidArgument("exponent too fine".into()))?;
    Ok(num_traits::pow(base.clone(), p).nth_root(q))
}

/// Hypotheses of the search at index `2n` for one pair of denominators.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub n: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub q_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q_b: BigInt,
    /// `lcm(q_a, q_b)`
    #[serde_as(as = "DisplayFromStr")]
    pub l: BigInt,
    /// `ln q_a / ln q_b`
    pub gamma: Enclosure,
    /// `ln l / ln q_b - 1`, the least `eta` for which `cond2` holds.
    pub eta_min: Enclosure,
    #[serde_as(as = "RatStr")]
    pub eta: BigRational,
    /// `11/12 + eta/4`
    #[serde_as(as = "RatStr")]
    pub mu: BigRational,
    /// `q_b^mu <= q_a <= q_b`
    pub cond1: bool,
    /// `l <= q_b^(1 + eta)`
    pub cond2: bool,
}

fn log_ratio(num: &BigInt, den: &BigInt) -> Enclosure {
    if num == den {
        return Enclosure::point(BigRational::one());
    }
    if num.is_one() {
        return Enclosure::zero();
    }
    let mut bits = LOG_BITS;
    loop {
        if let Some(r) = ln_int(num, bits).checked_div(&ln_int(den, bits)) {
            return r;
        }
        bits *= 2;
    }
}

/// [`check_hypotheses`] for explicit denominators.
pub fn hypotheses_for(
    n: usize,
    q_a: &BigInt,
    q_b: &BigInt,
    eta: &BigRational,
) -> Result<HypothesisReport> {
    if eta.is_negative() || !qlt_third(eta) {
        return Err(Error::InvalidArgument(format!(
            "eta = {eta} outside [0, 1/3)"
        )));
    }
    if q_b < &BigInt::from(2) || !q_a.is_positive() {
        return Err(Error::InvalidArgument(
            "denominators must satisfy q_a >= 1, q_b >= 2".into(),
        ));
    }
    let l = q_a.lcm(q_b);
    let mu = gamma_threshold(eta);
    let cond1 = q_a <= q_b && power_le(q_b, &mu, q_a)?;
    // l <= q_b^(1+eta)  <=>  l^q <= q_b^(p+q)
    let e = BigRational::one() + eta;
    let cond2 = match (e.numer().to_usize(), e.denom().to_usize()) {
        (Some(p), Some(q))
            if (p as u64).saturating_mul(bitlen(q_b)) <= EXACT_POWER_BITS
                && (q as u64).saturating_mul(bitlen(&l)) <= EXACT_POWER_BITS =>
        {
            num_traits::pow(l.clone(), q) <= num_traits::pow(q_b.clone(), p)
        }
        _ => {
            let lhs = ln_int(&l, LOG_BITS);
            let rhs = ln_int(q_b, LOG_BITS).scale(&e);
            match lhs.cmp_enc(&rhs) {
                Some(o) => o != Ordering::Greater,
                None => return Err(Error::Undecidable(format!("lcm {l} against q_b^(1+eta)"))),
            }
        }
    };
    let gamma = log_ratio(q_a, q_b);
    let eta_min = log_ratio(&l, q_b).add_rat(&-BigRational::one());
    Ok(HypothesisReport {
        n,
        q_a: q_a.clone(),
        q_b: q_b.clone(),
        l,
        gamma,
        eta_min,
        eta: eta.clone(),
        mu,
        cond1,
        cond2,
    })
}

fn qlt_third(eta: &BigRational) -> bool {
    eta * rat(3, 1) < BigRational::one()
}

/// Checks `q_b^(11/12 + eta/4) <= q_a <= q_b` and
/// `lcm(q_a, q_b) <= q_b^(1+eta)` on the denominators of index `2n`.
pub fn check_hypotheses(
    tbl_alpha: &ConvergentTable,
    tbl_beta: &ConvergentTable,
    n: usize,
    eta: &BigRational,
) -> Result<HypothesisReport> {
    let k = 2 * n;
    if tbl_alpha.len() <= k || tbl_beta.len() <= k {
        return Err(Error::InvalidArgument(format!(
            "convergent tables too short for index {k}"
        )));
    }
    hypotheses_for(n, tbl_alpha.q(k), tbl_beta.q(k), eta)
}

/// The window `(4/3, hi]` for the exponent of the search bound.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaWindow {
    #[serde_as(as = "RatStr")]
    pub lo: BigRational,
    /// `(3 + 4 gamma - eta) / 5`
    pub hi: Enclosure,
    #[serde_as(as = "RatStr")]
    pub chosen: BigRational,
}

impl DeltaWindow {
    /// Certified membership in `(4/3, hi]`.
    pub fn contains(&self, delta: &BigRational) -> bool {
        &self.lo < delta && qle(delta, self.hi.lo())
    }
}

/// Simplest rational (smallest denominator) in `[a, b]`, `0 <= a <= b`.
pub fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    let fa = rat_int(floor(a));
    if qeq(&fa, a) {
        return fa;
    }
    let next = &fa + BigRational::one();
    if qle(&next, b) {
        return next;
    }
    let inner = simplest_between(&(b - &fa).recip(), &(a - &fa).recip());
    fa + inner.recip()
}

/// `(4/3, (3 + 4 gamma - eta)/5]` with a chosen point inside.
///
/// The window is nonempty exactly when `gamma > 11/12 + eta/4`. When the
/// upper end is exact the midpoint is chosen; otherwise the simplest
/// rational in the middle half of the certified part of the window.
pub fn delta_window(gamma: &Enclosure, eta: &BigRational) -> Result<DeltaWindow> {
    match gamma.cmp_rat(&gamma_threshold(eta)) {
        Some(Ordering::Greater) => {}
        Some(_) => return Err(Error::EmptyWindow),
        None => {
            return Err(Error::Undecidable(format!(
                "gamma {gamma} against 11/12 + eta/4"
            )))
        }
    }
    let lo = rat(4, 3);
    let hi = gamma
        .scale(&rat(4, 5))
        .add_rat(&((rat(3, 1) - eta) * rat(1, 5)));
    let chosen = if hi.is_point() {
        (&lo + hi.lo()) * rat(1, 2)
    } else {
        let w = hi.lo() - &lo;
        let quarter = &w * rat(1, 4);
        simplest_between(&(&lo + &quarter), &(hi.lo() - &quarter))
    };
    debug_assert!(!chosen.is_zero());
    Ok(DeltaWindow { lo, hi, chosen })
}
