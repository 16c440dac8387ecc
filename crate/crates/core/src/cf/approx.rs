use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::expand::ConvergentTable;
use crate::error::{Error, Result};
use crate::exact::num::{bitlen, rat_int};
use crate::exact::serde_num::RatStr;
use crate::exact::{nearest_int_distance, Enclosure, RealSpec};
use crate::precision::Precision;

/// Certified error `e_n = alpha - p_n / q_n` with its classical bounds.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub n: usize,
    pub e_n: Enclosure,
    /// `1 / (2 q_{n+1}^2)`
    #[serde_as(as = "RatStr")]
    pub lower: BigRational,
    /// `1 / q_n^2`
    #[serde_as(as = "RatStr")]
    pub upper: BigRational,
    /// `0 < e_n` and `lower <= e_n <= upper`, as certified comparisons.
    pub verified: bool,
}

/// Error record at an even index `n`; `table` must reach `n + 1`.
pub fn error_record(
    alpha: &RealSpec,
    table: &ConvergentTable,
    n: usize,
    prec: &Precision,
) -> Result<ErrorRecord> {
    if alpha.is_rational() {
        return Err(Error::InvalidArgument(
            "approximation error needs an irrational number".into(),
        ));
    }
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("index {n} must be even")));
    }
    if table.len() < n + 2 {
        return Err(Error::InvalidArgument(format!(
            "table has {} entries, index {} needed",
            table.len(),
            n + 1
        )));
    }
    let c = table.convergent(n);
    let q1 = rat_int(table.q(n + 1).clone());
    let qn = rat_int(table.q(n).clone());
    let lower = (rat_int(BigInt::from(2)) * &q1 * &q1).recip();
    let upper = (&qn * &qn).recip();
    let start = prec.start_bits + 4 * bitlen(table.q(n + 1));
    prec.with_start(start)
        .refine(alpha.refinable(), "error record", |bits| {
            let e = alpha.enclosure(bits).add_rat(&-c.clone());
            let pos = e.cmp_rat(&BigRational::zero());
            let lo = e.cmp_rat(&lower);
            let hi = e.cmp_rat(&upper);
            if pos.is_none() || lo.is_none() || hi.is_none() {
                return Ok(None);
            }
            let verified = pos == Some(Ordering::Greater)
                && lo != Some(Ordering::Less)
                && hi != Some(Ordering::Greater);
            Ok(Some(ErrorRecord {
                n,
                e_n: e,
                lower: lower.clone(),
                upper: upper.clone(),
                verified,
            }))
        })
}

/// Certified lower bound of `min_{1 <= q <= q_max} q ||q alpha||`.
///
/// This is a restricted minimum: it says nothing about larger `q`.
pub fn bad_approx_estimate(alpha: &RealSpec, q_max: u64, prec: &Precision) -> Result<BigRational> {
    if q_max == 0 {
        return Err(Error::InvalidArgument("q_max must be at least 1".into()));
    }
    let start = prec.start_bits + 2 * 64u64.saturating_sub(q_max.leading_zeros() as u64);
    prec.with_start(start)
        .refine(alpha.refinable(), "bad approximation estimate", |bits| {
            let a = alpha.enclosure(bits);
            let mut best: Option<BigRational> = None;
            for q in 1..=q_max {
                let qq = rat_int(BigInt::from(q));
                let d = match nearest_int_distance(&a.scale(&qq)) {
                    Ok(d) => d,
                    Err(Error::AmbiguousEnclosure(_)) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let v = d.lo() * &qq;
                if best.as_ref().map_or(true, |b| v < *b) {
                    best = Some(v);
                }
                if best.as_ref().is_some_and(|b| b.is_zero()) {
                    break;
                }
            }
            Ok(best)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::cf_expand;
    use crate::exact::num::{rat, to_f64};

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn golden_n0() {
        let a = RealSpec::metallic(1);
        let t = cf_expand(&a, 4).unwrap();
        let r = error_record(&a, &t, 0, &p()).unwrap();
        assert!(r.verified);
        assert_eq!(r.lower, rat(1, 2));
        assert_eq!(r.upper, rat(1, 1));
        assert!((r.e_n.to_f64() - 0.6180339887).abs() < 1e-9);
    }

    #[test]
    fn sqrt2_n2() {
        let a = RealSpec::sqrt(2);
        let t = cf_expand(&a, 4).unwrap();
        let r = error_record(&a, &t, 2, &p()).unwrap();
        assert_eq!(r.lower, rat(1, 288));
        assert_eq!(r.upper, rat(1, 25));
        assert!(r.verified);
        // sqrt2 - 7/5
        assert!((r.e_n.to_f64() - 0.0142135623731).abs() < 1e-12);
    }

    #[test]
    fn rejects_rational_and_odd() {
        let a = RealSpec::exact(rat(1, 2));
        let t = cf_expand(&a, 4).unwrap();
        assert!(matches!(
            error_record(&a, &t, 0, &p()),
            Err(Error::InvalidArgument(_))
        ));
        let b = RealSpec::sqrt(3);
        let t = cf_expand(&b, 6).unwrap();
        assert!(matches!(
            error_record(&b, &t, 1, &p()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            error_record(&b, &t, 6, &p()),
            Err(Error::InvalidArgument(_))
        ));
    }

    /// Plain scan in f64 with a generous guard, used as the oracle.
    fn scan_oracle(x: f64, q_max: u64) -> (f64, u64) {
        let mut best = (f64::INFINITY, 0);
        for q in 1..=q_max {
            let y = q as f64 * x;
            let v = q as f64 * (y - y.round()).abs();
            if v < best.0 {
                best = (v, q);
            }
        }
        best
    }

    #[test]
    fn golden_restricted_minimum() {
        // minimum over q <= 100 is attained at q = 1: ||phi|| = 2 - phi
        let v = bad_approx_estimate(&RealSpec::metallic(1), 100, &p()).unwrap();
        let (o, q) = scan_oracle((1.0 + 5f64.sqrt()) / 2.0, 100);
        assert_eq!(q, 1);
        assert!((to_f64(&v) - o).abs() < 1e-12);
        assert!((to_f64(&v) - 0.3819660112501051).abs() < 1e-12);
    }

    #[test]
    fn rational_gives_zero() {
        let v = bad_approx_estimate(&RealSpec::exact(rat(1, 2)), 5, &p()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn sqrt2_minimum_at_pell_denominator() {
        let v = bad_approx_estimate(&RealSpec::sqrt(2), 10, &p()).unwrap();
        let (o, q) = scan_oracle(2f64.sqrt(), 10);
        assert!([1, 2, 5, 12].contains(&q));
        assert!((to_f64(&v) - o).abs() < 1e-12);
    }
}
