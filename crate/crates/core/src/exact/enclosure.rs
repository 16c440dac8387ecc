use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::num::{
    ceil_scaled, dyadic, exact_sqrt, floor, floor_scaled, isqrt, pow2, qeq, qle, qlt, qmax, qmin,
    rat_int, to_f64,
};
use super::serde_num::RatStr;

/// A real number known to lie in the closed rational interval `[lo, hi]`.
///
/// Arithmetic is exact over the rationals, so every result contains the
/// exact result of the same operation on any points of the operands.
#[serde_as]
#[derive(Clone, Debug, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEnclosure")]
pub struct Enclosure {
    #[serde_as(as = "RatStr")]
    lo: BigRational,
    #[serde_as(as = "RatStr")]
    hi: BigRational,
}

#[serde_as]
#[derive(Deserialize)]
struct RawEnclosure {
    #[serde_as(as = "RatStr")]
    lo: BigRational,
    #[serde_as(as = "RatStr")]
    hi: BigRational,
}

impl PartialEq for Enclosure {
    fn eq(&self, o: &Self) -> bool {
        qeq(&self.lo, &o.lo) && qeq(&self.hi, &o.hi)
    }
}

impl TryFrom<RawEnclosure> for Enclosure {
    type Error = String;
    fn try_from(r: RawEnclosure) -> Result<Self, String> {
        Enclosure::try_new(r.lo, r.hi).ok_or_else(|| "enclosure with lo > hi".to_string())
    }
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(qle(&lo, &hi), "enclosure bounds out of order");
        Enclosure { lo, hi }
    }

    pub fn try_new(lo: BigRational, hi: BigRational) -> Option<Self> {
        qle(&lo, &hi).then_some(Enclosure { lo, hi })
    }

    /// Hull of two bounds given in either order.
    pub fn spanning(a: BigRational, b: BigRational) -> Self {
        if qle(&a, &b) {
            Enclosure { lo: a, hi: b }
        } else {
            Enclosure { lo: b, hi: a }
        }
    }

    pub fn point(v: BigRational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Self::point(rat_int(v.into()))
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn into_bounds(self) -> (BigRational, BigRational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / rat_int(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        qeq(&self.lo, &self.hi)
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        qle(&self.lo, v) && qle(v, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        qle(&self.lo, &other.hi) && qle(&other.lo, &self.hi)
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        qle(&other.lo, &self.lo) && qle(&self.hi, &other.hi)
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: qmin(&self.lo, &other.lo).clone(),
            hi: qmax(&self.hi, &other.hi).clone(),
        }
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        Enclosure::try_new(
            qmax(&self.lo, &other.lo).clone(),
            qmin(&self.hi, &other.hi).clone(),
        )
    }

    /// Certified comparison against a rational: `None` when `v` is inside
    /// the interval (unless the interval is the single point `v`).
    pub fn cmp_rat(&self, v: &BigRational) -> Option<Ordering> {
        if qlt(&self.hi, v) {
            Some(Ordering::Less)
        } else if qlt(v, &self.lo) {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison of two enclosed reals.
    pub fn cmp_enc(&self, other: &Enclosure) -> Option<Ordering> {
        if qlt(&self.hi, &other.lo) {
            Some(Ordering::Less)
        } else if qlt(&other.hi, &self.lo) {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Sign as -1, 0, 1 when certified.
    pub fn signum(&self) -> Option<i8> {
        self.cmp_rat(&BigRational::zero()).map(|o| o as i8)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// `floor` of the enclosed value, when every point shares it.
    pub fn floor(&self) -> Option<BigInt> {
        let (a, b) = (floor(&self.lo), floor(&self.hi));
        (a == b).then_some(a)
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Enclosure {
                lo: BigRational::zero(),
                hi: qmax(&self.hi, &-self.lo.clone()).clone(),
            }
        }
    }

    pub fn square(&self) -> Enclosure {
        let a = self.abs();
        Enclosure {
            lo: &a.lo * &a.lo,
            hi: &a.hi * &a.hi,
        }
    }

    pub fn powi(&self, n: u32) -> Enclosure {
        match n {
            0 => Enclosure::point(BigRational::one()),
            _ if n % 2 == 0 => self.square().powi(n / 2),
            _ => {
                // odd powers are monotone
                Enclosure {
                    lo: num_traits::pow(self.lo.clone(), n as usize),
                    hi: num_traits::pow(self.hi.clone(), n as usize),
                }
            }
        }
    }

    pub fn scale(&self, k: &BigRational) -> Enclosure {
        Enclosure::spanning(&self.lo * k, &self.hi * k)
    }

    pub fn add_rat(&self, k: &BigRational) -> Enclosure {
        Enclosure {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    pub fn recip(&self) -> Option<Enclosure> {
        if self.contains_zero() {
            return None;
        }
        Some(Enclosure {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn checked_div(&self, other: &Enclosure) -> Option<Enclosure> {
        Some(self * &other.recip()?)
    }

    /// Outward rounding to dyadic endpoints with `bits` fractional bits.
    pub fn round_out(&self, bits: u64) -> Enclosure {
        Enclosure {
            lo: dyadic(floor_scaled(&self.lo, bits), bits),
            hi: dyadic(ceil_scaled(&self.hi, bits), bits),
        }
    }

    /// Enclosure of the square root with endpoints on a `2^-bits` grid.
    /// Requires `lo >= 0`; exact on perfect-square points.
    pub fn sqrt(&self, bits: u64) -> Option<Enclosure> {
        if self.lo.is_negative() {
            return None;
        }
        if self.is_point() {
            if let Some(r) = exact_sqrt(&self.lo) {
                return Some(Enclosure::point(r));
            }
        }
        let lo = exact_sqrt(&self.lo)
            .unwrap_or_else(|| dyadic(isqrt(&floor_scaled(&self.lo, 2 * bits)), bits));
        let hi = exact_sqrt(&self.hi).unwrap_or_else(|| {
            let s = isqrt(&floor_scaled(&self.hi, 2 * bits));
            dyadic(s + BigInt::one(), bits)
        });
        Some(Enclosure { lo, hi })
    }

    /// Midpoint as `f64`; heuristic use only.
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    /// `[-r, r]`.
    pub fn symmetric(r: BigRational) -> Enclosure {
        Enclosure::spanning(-r.clone(), r)
    }

    /// Grid of width `2^-bits` around an integer-scaled value.
    pub fn from_scaled(num_lo: BigInt, num_hi: BigInt, bits: u64) -> Enclosure {
        Enclosure::new(dyadic(num_lo, bits), dyadic(num_hi, bits))
    }

    /// Upper bound on the width as `2^-k` with the largest such `k`, useful
    /// for logging.
    pub fn width_bits(&self) -> Option<u64> {
        let w = self.width();
        if w.is_zero() {
            return None;
        }
        let mut k = 0u64;
        while rat_int(pow2(k + 1)) * &w <= BigRational::one() {
            k += 1;
        }
        Some(k)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "[{}]", self.lo)
        } else {
            write!(f, "[{:.6e}, {:.6e}]", to_f64(&self.lo), to_f64(&self.hi))
        }
    }
}

impl From<BigRational> for Enclosure {
    fn from(v: BigRational) -> Self {
        Enclosure::point(v)
    }
}

impl From<BigInt> for Enclosure {
    fn from(v: BigInt) -> Self {
        Enclosure::point(rat_int(v))
    }
}

impl<'a> Add<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn add(self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl<'a> Sub<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn sub(self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl<'a> Mul<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn mul(self, o: &Enclosure) -> Enclosure {
        if self.is_point() {
            return o.scale(&self.lo);
        }
        if o.is_point() {
            return self.scale(&o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().fold(&c[0], |m, x| qmin(m, x)).clone();
        let hi = c.iter().fold(&c[0], |m, x| qmax(m, x)).clone();
        Enclosure { lo, hi }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: Enclosure) -> Enclosure {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Enclosure> for Enclosure {
            type Output = Enclosure;
            fn $m(self, o: &Enclosure) -> Enclosure {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Enclosure> for &'a Enclosure {
            type Output = Enclosure;
            fn $m(self, o: Enclosure) -> Enclosure {
                self.$m(&o)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
