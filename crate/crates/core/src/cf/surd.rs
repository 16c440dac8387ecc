use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::exact::num::{is_perfect_square, isqrt, rat_int};
use crate::exact::Enclosure;

/// The real quadratic irrational `(p + sqrt(d)) / q`.
///
/// Kept in the canonical form `q | d - p^2` required by the exact
/// continued-fraction recurrence; [`QuadraticSurd::new`] rescales inputs
/// that are not.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSurd")]
pub struct QuadraticSurd {
    #[serde_as(as = "DisplayFromStr")]
    p: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    d: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    q: BigInt,
}

#[serde_as]
#[derive(Deserialize)]
struct RawSurd {
    #[serde_as(as = "DisplayFromStr")]
    p: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    d: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    q: BigInt,
}

impl TryFrom<RawSurd> for QuadraticSurd {
    type Error = Error;
    fn try_from(r: RawSurd) -> Result<Self> {
        QuadraticSurd::new(r.p, r.d, r.q)
    }
}

impl QuadraticSurd {
    pub fn new(p: BigInt, d: BigInt, q: BigInt) -> Result<Self> {
        if !d.is_positive() || is_perfect_square(&d) {
            return Err(Error::InvalidArgument(format!(
                "surd radicand {d} must be a positive non-square"
            )));
        }
        if q.is_zero() {
            return Err(Error::InvalidArgument("surd denominator is zero".into()));
        }
        let (p, d, q) = if (&d - &p * &p).is_multiple_of(&q) {
            (p, d, q)
        } else {
            let aq = q.abs();
            (&p * &aq, &d * &q * &q, &q * &aq)
        };
        Ok(QuadraticSurd { p, d, q })
    }

    /// `sqrt(n)` for a positive non-square `n`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(BigInt::zero(), n.into(), BigInt::one())
    }

    /// The metallic mean `[b; b, b, ...] = (b + sqrt(b^2 + 4)) / 2`.
    pub fn metallic(b: impl Into<BigInt>) -> Result<Self> {
        let b = b.into();
        if b < BigInt::one() {
            return Err(Error::InvalidArgument(format!(
                "metallic index {b} must be >= 1"
            )));
        }
        let d = &b * &b + 4;
        Self::new(b, d, BigInt::from(2))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Exact `floor` of the value.
    pub fn floor(&self) -> BigInt {
        let s = isqrt(&self.d);
        let num = &self.p + s;
        if self.q.is_positive() {
            num.div_floor(&self.q)
        } else {
            -num.div_floor(&-&self.q) - 1
        }
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn enclosure(&self, bits: u64) -> Enclosure {
        let root = Enclosure::point(rat_int(self.d.clone()))
            .sqrt(bits)
            .expect("radicand is positive");
        root.add_rat(&rat_int(self.p.clone()))
            .scale(&BigRational::new(BigInt::one(), self.q.clone()))
    }

    /// Complete-quotient step of the continued-fraction algorithm:
    /// returns the partial quotient and the surd `1 / (x - a)`.
    pub fn step(&self) -> (BigInt, QuadraticSurd) {
        let a = self.floor();
        let p = &a * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        (
            a,
            QuadraticSurd {
                p,
                d: self.d.clone(),
                q,
            },
        )
    }

    /// The `(p, q)` pair that identifies a state of the expansion.
    pub fn state(&self) -> (BigInt, BigInt) {
        (self.p.clone(), self.q.clone())
    }
}

impl std::fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} + sqrt({}))/{}", self.p, self.d, self.q)
    }
}
