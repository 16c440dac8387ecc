use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::{metallic_q, QuadraticSurd};
use crate::error::{Error, Result};
use crate::pipeline::{gamma_threshold, power_le};

/// Metallic means `alpha = [a; a, ...]` and `beta = [b; b, ...]`, `a < b`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetallicPair {
    #[serde_as(as = "DisplayFromStr")]
    pub a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub b: BigInt,
    pub alpha: QuadraticSurd,
    pub beta: QuadraticSurd,
    /// `a` does not divide `b`.
    pub independent: bool,
}

impl MetallicPair {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if a < BigInt::from(1) || a >= b {
            return Err(Error::InvalidArgument(format!(
                "pair needs 1 <= a < b, got ({a}, {b})"
            )));
        }
        Ok(MetallicPair {
            alpha: QuadraticSurd::metallic(a.clone())?,
            beta: QuadraticSurd::metallic(b.clone())?,
            independent: !b.is_multiple_of(&a),
            a,
            b,
        })
    }

    /// `(q_2n(alpha), q_2n(beta))`
    pub fn denominators(&self, n: usize) -> (BigInt, BigInt) {
        (metallic_q(&self.a, 2 * n), metallic_q(&self.b, 2 * n))
    }
}

/// All pairs with `b <= b_max` and `b^(11/12 + eta/4) < a < b`.
pub fn enumerate_pairs(eta: &BigRational, b_max: &BigInt) -> Result<Vec<MetallicPair>> {
    let mu = gamma_threshold(eta);
    if eta < &BigRational::zero()
        || eta * BigRational::from_integer(3.into()) >= BigRational::from_integer(1.into())
    {
        return Err(Error::InvalidArgument(format!(
            "eta = {eta} outside [0, 1/3)"
        )));
    }
    let b_max = b_max
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("b_max out of range".into()))?;
    let p = mu
        .numer()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("eta too fine".into()))?;
    let q = mu
        .denom()
        .to_usize()
        .ok_or_else(|| Error::InvalidArgument("eta too fine".into()))?;
    let mut out = Vec::new();
    for b in 3..=b_max {
        let bp = num_traits::pow(BigInt::from(b), p);
        // strictly above b^mu: a^q > b^p
        let mut a = b;
        while a > 1 && num_traits::pow(BigInt::from(a - 1), q) > bp {
            a -= 1;
        }
        for a in a..b {
            out.push(MetallicPair::new(BigInt::from(a), BigInt::from(b))?);
        }
    }
    Ok(out)
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCheck {
    pub n: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub q_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q_b: BigInt,
    /// `q_b^(11/12 + eta/4) <= q_a`
    pub lower: bool,
    /// `q_a <= q_b`
    pub upper: bool,
}

impl RatioCheck {
    pub fn holds(&self) -> bool {
        self.lower && self.upper
    }
}

/// Exact check of `q_2n(beta)^(11/12 + eta/4) <= q_2n(alpha) <= q_2n(beta)`
/// for each `n`.
pub fn ratio_check(
    pair: &MetallicPair,
    eta: &BigRational,
    ns: &[usize],
) -> Result<Vec<RatioCheck>> {
    let mu = gamma_threshold(eta);
    ns.iter()
        .map(|&n| {
            let (q_a, q_b) = pair.denominators(n);
            let lower = if q_b < BigInt::from(2) {
                true
            } else {
                power_le(&q_b, &mu, &q_a)?
            };
            Ok(RatioCheck {
                n,
                upper: q_a <= q_b,
                lower,
                q_a,
                q_b,
            })
        })
        .collect()
}

/// Smallest `n0` in `ns` from which every checked `n` passes.
pub fn smallest_verified_start(checks: &[RatioCheck]) -> Option<usize> {
    let last_fail = checks.iter().rposition(|c| !c.holds());
    match last_fail {
        None => checks.first().map(|c| c.n),
        Some(i) => checks.get(i + 1).map(|c| c.n),
    }
}
