use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::error::{Error, Result};
use crate::exact::num::{bitlen, qlt};
use crate::exact::serde_num::RatStr;
use crate::exact::{nearest_int_distance, Enclosure, RealSpec};
use crate::precision::Precision;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LittlewoodRow {
    pub n: u64,
    /// `n ||n alpha|| ||n beta||`
    pub term: Enclosure,
    /// Least upper bound of the terms up to `n`.
    #[serde_as(as = "RatStr")]
    pub prefix_min: BigRational,
}

fn term(alpha: &RealSpec, beta: &RealSpec, n: u64, prec: &Precision) -> Result<Enclosure> {
    let refinable = alpha.refinable() || beta.refinable();
    let nb = BigInt::from(n);
    let nr = BigRational::from_integer(nb.clone());
    prec.with_start(prec.start_bits + bitlen(&nb))
        .refine(refinable, "littlewood term", |bits| {
            let da = nearest_int_distance(&alpha.enclosure(bits).scale(&nr));
            let db = nearest_int_distance(&beta.enclosure(bits).scale(&nr));
            match (da, db) {
                (Ok(a), Ok(b)) => Ok(Some((&a * &b).scale(&nr))),
                (Err(Error::AmbiguousEnclosure(_)), _) | (_, Err(Error::AmbiguousEnclosure(_))) => {
                    Ok(None)
                }
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        })
}

/// `n ||n alpha|| ||n beta||` for `n = 1..=q_max` with running minima of
/// the certified upper bounds.
pub fn littlewood_min(
    alpha: &RealSpec,
    beta: &RealSpec,
    q_max: u64,
    prec: &Precision,
) -> Result<Vec<LittlewoodRow>> {
    if q_max == 0 {
        return Err(Error::InvalidArgument("Q must be at least 1".into()));
    }
    let terms: Vec<Enclosure> = (1..=q_max)
        .into_par_iter()
        .map(|n| term(alpha, beta, n, prec))
        .collect::<Result<_>>()?;
    let mut best: Option<BigRational> = None;
    Ok(terms
        .into_iter()
        .zip(1..)
        .map(|(term, n)| {
            let hi = term.hi().clone();
            let m = match best.take() {
                Some(b) if !qlt(&hi, &b) => b,
                _ => hi,
            };
            best = Some(m.clone());
            LittlewoodRow {
                n,
                term,
                prefix_min: m,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::{rat, to_f64};

    #[test]
    fn sqrt2_sqrt3_first_terms() {
        let rows = littlewood_min(
            &RealSpec::sqrt(2),
            &RealSpec::sqrt(3),
            3,
            &Precision::default(),
        )
        .unwrap();
        let f1 = (2f64.sqrt() - 1.0) * (2.0 - 3f64.sqrt());
        assert!((rows[0].term.to_f64() - f1).abs() < 1e-15);
        assert!((rows[0].term.to_f64() - 0.1110).abs() < 1e-3);
        assert!((rows[2].term.to_f64() - 0.1428).abs() < 1e-3);
        assert!((to_f64(&rows[2].prefix_min) - 0.1110).abs() < 1e-3);
    }

    #[test]
    fn rational_hits_zero() {
        let rows = littlewood_min(
            &RealSpec::exact(rat(2, 7)),
            &RealSpec::sqrt(3),
            10,
            &Precision::default(),
        )
        .unwrap();
        assert_eq!(rows[6].term, Enclosure::zero());
        assert_eq!(rows[9].prefix_min, rat(0, 1));
    }

    #[test]
    fn prefix_min_non_increasing() {
        let rows = littlewood_min(
            &RealSpec::metallic(1),
            &RealSpec::sqrt(5),
            500,
            &Precision::default(),
        )
        .unwrap();
        for w in rows.windows(2) {
            assert!(w[1].prefix_min <= w[0].prefix_min);
        }
    }
}
