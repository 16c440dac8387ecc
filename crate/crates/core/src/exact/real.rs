use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::enclosure::Enclosure;
use super::num::{
    bitlen, bits_for_width, is_perfect_square, isqrt, parse_decimal, qle, qlt, rat, rat_int,
    round_half_up, to_f64,
};
use super::serde_num::RatStr;
use crate::cf::QuadraticSurd;
use crate::error::{Error, Result};
use crate::precision::Precision;

/// How a real input is known.
///
/// A surd can be enclosed to any width. A literal is the interval
/// `value ± radius`; with a zero radius it is an exact rational.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealSpec {
    Surd(QuadraticSurd),
    Literal {
        #[serde_as(as = "RatStr")]
        value: BigRational,
        #[serde_as(as = "RatStr")]
        radius: BigRational,
    },
}

impl RealSpec {
    pub fn exact(value: BigRational) -> Self {
        RealSpec::Literal {
            value,
            radius: BigRational::zero(),
        }
    }

    pub fn integer(v: i64) -> Self {
        Self::exact(rat(v, 1))
    }

    pub fn sqrt(n: u64) -> Self {
        let n = BigInt::from(n);
        if is_perfect_square(&n) {
            Self::exact(rat_int(isqrt(&n)))
        } else {
            RealSpec::Surd(QuadraticSurd::sqrt(n).expect("non-square"))
        }
    }

    pub fn metallic(b: u64) -> Self {
        RealSpec::Surd(QuadraticSurd::metallic(b).expect("b >= 1"))
    }

    /// Enclosure of width at most `2^-bits` (literals: their fixed interval).
    pub fn enclosure(&self, bits: u64) -> Enclosure {
        match self {
            RealSpec::Surd(s) => s.enclosure(bits),
            RealSpec::Literal { value, radius } => Enclosure::new(value - radius, value + radius),
        }
    }

    /// Enclosure of width at most `width`, or `PrecisionExhausted` for a
    /// literal whose declared precision is too coarse.
    pub fn enclosure_within(&self, width: &BigRational) -> Result<Enclosure> {
        match self {
            RealSpec::Surd(s) => Ok(s.enclosure(bits_for_width(width))),
            RealSpec::Literal { value, radius } => {
                if radius * rat(2, 1) <= *width {
                    Ok(self.enclosure(0))
                } else {
                    Err(Error::PrecisionExhausted(format!(
                        "literal {value} ± {radius} cannot reach width {width}"
                    )))
                }
            }
        }
    }

    /// Whether asking for more bits can tighten the enclosure.
    pub fn refinable(&self) -> bool {
        matches!(self, RealSpec::Surd(_))
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        match self {
            RealSpec::Literal { value, radius } if radius.is_zero() => Some(value),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.exact_value().is_some()
    }

    /// Approximate value; heuristic use only.
    pub fn to_f64(&self) -> f64 {
        self.enclosure(64).to_f64()
    }
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Surd(s) => write!(f, "{s}"),
            RealSpec::Literal { value, radius } if radius.is_zero() => write!(f, "{value}"),
            RealSpec::Literal { value, radius } => write!(f, "{value}±{radius}"),
        }
    }
}

impl FromStr for RealSpec {
    type Err = Error;

    /// Accepted forms:
    /// `sqrtN` / `sqrt(N)`, `metallicB` / `metallic(B)`, `golden`,
    /// `surd(P,D,Q)` for `(P + sqrt D)/Q`, a decimal or `p/q` literal
    /// (exact), or a decimal ending in `...` (truncated: radius one unit
    /// in the last written digit).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("unrecognized real {s:?}"));
        let arg = |prefix: &str| -> Option<&str> {
            let rest = t.strip_prefix(prefix)?;
            Some(
                rest.strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .unwrap_or(rest)
                    .trim(),
            )
        };
        if t == "golden" || t == "phi" {
            return Ok(RealSpec::metallic(1));
        }
        if let Some(a) = arg("sqrt") {
            let n: BigInt = a.parse().map_err(|_| bad())?;
            if n.is_negative() {
                return Err(bad());
            }
            if is_perfect_square(&n) {
                return Ok(RealSpec::exact(rat_int(isqrt(&n))));
            }
            return Ok(RealSpec::Surd(QuadraticSurd::sqrt(n)?));
        }
        if let Some(a) = arg("metallic") {
            let b: BigInt = a.parse().map_err(|_| bad())?;
            return Ok(RealSpec::Surd(QuadraticSurd::metallic(b)?));
        }
        if let Some(a) = arg("surd") {
            let parts: Vec<BigInt> = a
                .split(',')
                .map(|p| p.trim().parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if parts.len() != 3 {
                return Err(bad());
            }
            return Ok(RealSpec::Surd(QuadraticSurd::new(
                parts[0].clone(),
                parts[1].clone(),
                parts[2].clone(),
            )?));
        }
        if let Some(body) = t.strip_suffix("...") {
            let (value, digits) = parse_decimal(body)?;
            let radius = BigRational::new(1.into(), BigInt::from(10u32).pow(digits));
            return Ok(RealSpec::Literal { value, radius });
        }
        let (value, _) = parse_decimal(t)?;
        Ok(RealSpec::exact(value))
    }
}

/// `f(x, y, z) = x (a x - y)(b x - z)` over enclosures of `a`, `b`.
pub fn form_value(v: &[BigRational; 3], alpha: &Enclosure, beta: &Enclosure) -> Enclosure {
    let x = Enclosure::point(v[0].clone());
    let fa = alpha.scale(&v[0]).add_rat(&-v[1].clone());
    let fb = beta.scale(&v[0]).add_rat(&-v[2].clone());
    &(&x * &fa) * &fb
}

/// Certified enclosure of `f(u)` of width at most `width`.
///
/// Refines `alpha` and `beta` by doubling precision; fails with
/// `PrecisionExhausted` when a literal cannot support the requested width.
pub fn eval_form(
    u: &[BigInt; 3],
    alpha: &RealSpec,
    beta: &RealSpec,
    width: &BigRational,
    prec: &Precision,
) -> Result<Enclosure> {
    let v = [
        rat_int(u[0].clone()),
        rat_int(u[1].clone()),
        rat_int(u[2].clone()),
    ];
    eval_form_rational(&v, alpha, beta, width, prec)
}

/// [`eval_form`] at a rational point.
pub fn eval_form_rational(
    v: &[BigRational; 3],
    alpha: &RealSpec,
    beta: &RealSpec,
    width: &BigRational,
    prec: &Precision,
) -> Result<Enclosure> {
    if !width.is_positive() {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    if v[0].is_zero() {
        return Ok(Enclosure::zero());
    }
    let refinable = alpha.refinable() || beta.refinable();
    let scale_bits =
        2 * bitlen(&v[0].numer().abs()) + bitlen(&(v[1].abs() + v[2].abs()).ceil().to_integer());
    let prec = prec.with_start(prec.start_bits + scale_bits);
    // With a fixed-width literal involved, more bits stop helping once the
    // width no longer halves.
    let mut prev: Option<BigRational> = None;
    prec.refine(refinable, "eval_form", |bits| {
        let f = form_value(v, &alpha.enclosure(bits), &beta.enclosure(bits));
        let w = f.width();
        if qle(&w, width) {
            return Ok(Some(f));
        }
        if let Some(p) = &prev {
            if !qlt(&(&w * rat(2, 1)), p) {
                return Err(Error::PrecisionExhausted(format!(
                    "eval_form stalls at width {} above {width}",
                    to_f64(&w)
                )));
            }
        }
        prev = Some(w);
        Ok(None)
    })
}

/// Enclosure of the distance to the nearest integer, `||x|| = d(x, Z)`.
///
/// Exact half-integers give `[1/2, 1/2]`. Fails with `AmbiguousEnclosure`
/// when the interval is wider than 1/4 or has a half-integer strictly
/// inside it.
pub fn nearest_int_distance(x: &Enclosure) -> Result<Enclosure> {
    if x.width() >= rat(1, 4) {
        return Err(Error::AmbiguousEnclosure(format!(
            "interval {x} too wide for nearest-integer distance"
        )));
    }
    let n = round_half_up(x.lo());
    let shifted = x.add_rat(&-rat_int(n));
    let half = rat(1, 2);
    if shifted.hi() <= &half {
        return Ok(shifted.abs());
    }
    Err(Error::AmbiguousEnclosure(format!(
        "interval {x} straddles a half-integer"
    )))
}
