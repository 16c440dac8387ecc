use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::surd::QuadraticSurd;
use crate::error::{Error, Result};
use crate::exact::num::rat_int;
use crate::exact::{Enclosure, RealSpec};

/// Extra steps spent looking for the period beyond the requested count.
const PERIOD_SEARCH_LIMIT: usize = 100_000;

/// Partial quotients `a_k` with their convergents `p_k / q_k`.
///
/// Indexing starts at `k = 0` with `p_0 = a_0`, `q_0 = 1`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergentTable {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub quotients: Vec<BigInt>,
    #[serde_as(as = "Vec<(DisplayFromStr, DisplayFromStr)>")]
    pub convergents: Vec<(BigInt, BigInt)>,
    /// `(preperiod, period)` when the expansion is known to be periodic.
    pub period: Option<(usize, usize)>,
}

impl ConvergentTable {
    pub fn from_quotients(quotients: Vec<BigInt>) -> Self {
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
        for a in &quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            convergents.push((p.clone(), q.clone()));
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        ConvergentTable {
            quotients,
            convergents,
            period: None,
        }
    }

    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.convergents[k].0
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.convergents[k].1
    }

    /// The convergent `p_k / q_k`.
    pub fn convergent(&self, k: usize) -> BigRational {
        BigRational::new(self.p(k).clone(), self.q(k).clone())
    }

    /// `p_k q_{k-1} - p_{k-1} q_k`, which is `(-1)^(k-1)`.
    pub fn determinant(&self, k: usize) -> BigInt {
        assert!(k >= 1);
        self.p(k) * self.q(k - 1) - self.p(k - 1) * self.q(k)
    }

    pub fn max_quotient(&self) -> Option<&BigInt> {
        self.quotients.iter().skip(1).max()
    }
}

/// First `count` partial quotients of a surd, with its period when one is
/// found by exact state repetition.
pub fn cf_expand_surd(s: &QuadraticSurd, count: usize) -> ConvergentTable {
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients = Vec::with_capacity(count);
    let mut period = None;
    let mut x = s.clone();
    let mut k = 0;
    while quotients.len() < count || (period.is_none() && k < count + PERIOD_SEARCH_LIMIT) {
        if period.is_none() {
            if let Some(&j) = seen.get(&x.state()) {
                period = Some((j, k - j));
                if quotients.len() >= count {
                    break;
                }
            } else {
                seen.insert(x.state(), k);
            }
        }
        let (a, next) = x.step();
        if quotients.len() < count {
            quotients.push(a);
        }
        x = next;
        k += 1;
    }
    let mut t = ConvergentTable::from_quotients(quotients);
    t.period = period;
    t
}

/// Expansion of a literal, returning every certified quotient together
/// with the reason the expansion stopped early, if it did.
pub fn cf_expand_literal_partial(x: &Enclosure, count: usize) -> (ConvergentTable, Option<Error>) {
    let mut quotients = Vec::new();
    let mut cur = x.clone();
    let mut stop = None;
    while quotients.len() < count {
        let a = match cur.floor() {
            Some(a) => a,
            None => {
                stop = Some(Error::AmbiguousExpansion {
                    certified: quotients.len(),
                });
                break;
            }
        };
        let frac = cur.add_rat(&-rat_int(a.clone()));
        quotients.push(a);
        if frac.is_point() && frac.lo().is_zero() {
            break;
        }
        match frac.recip() {
            Some(r) if frac.is_positive() => cur = r,
            _ => {
                stop = Some(Error::AmbiguousExpansion {
                    certified: quotients.len(),
                });
                break;
            }
        }
    }
    (ConvergentTable::from_quotients(quotients), stop)
}

/// Up to `count` quotients of a literal, each certified by its enclosure.
/// Rational inputs end at their last quotient.
pub fn cf_expand_literal(x: &RealSpec, count: usize) -> Result<ConvergentTable> {
    let enc = x.enclosure(0);
    match cf_expand_literal_partial(&enc, count) {
        (t, None) => Ok(t),
        (_, Some(e)) => Err(e),
    }
}

/// Expansion of any real spec: exact for surds, certified for literals.
pub fn cf_expand(x: &RealSpec, count: usize) -> Result<ConvergentTable> {
    match x {
        RealSpec::Surd(s) => Ok(cf_expand_surd(s, count)),
        RealSpec::Literal { .. } => cf_expand_literal(x, count),
    }
}

/// Exact expansion of a rational, used as a test oracle.
#[cfg(test)]
pub(crate) fn rational_cf(mut x: BigRational) -> Vec<BigInt> {
    use crate::exact::num::floor;
    let mut out = Vec::new();
    loop {
        let a = floor(&x);
        out.push(a.clone());
        let f = x - rat_int(a);
        if f.is_zero() {
            return out;
        }
        x = f.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::{int, rat};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn golden_ratio() {
        let t = cf_expand_surd(&QuadraticSurd::metallic(1).unwrap(), 6);
        assert_eq!(t.quotients, ints(&[1, 1, 1, 1, 1, 1]));
        assert_eq!(t.period, Some((0, 1)));
        let qs: Vec<_> = (0..6).map(|k| t.q(k).clone()).collect();
        assert_eq!(qs, ints(&[1, 1, 2, 3, 5, 8]));
    }

    #[test]
    fn sqrt2() {
        let t = cf_expand_surd(&QuadraticSurd::sqrt(2).unwrap(), 5);
        assert_eq!(t.quotients, ints(&[1, 2, 2, 2, 2]));
        assert_eq!(t.period, Some((1, 1)));
        assert_eq!(t.convergents[2], (int(7), int(5)));
    }

    #[test]
    fn metallic_seven() {
        let t = cf_expand_surd(&QuadraticSurd::metallic(7).unwrap(), 10);
        assert_eq!(t.quotients, vec![int(7); 10]);
        assert_eq!(t.period, Some((0, 1)));
    }

    #[test]
    fn longer_periods() {
        // sqrt(19) = [4; 2, 1, 3, 1, 2, 8]
        let t = cf_expand_surd(&QuadraticSurd::sqrt(19).unwrap(), 8);
        assert_eq!(t.quotients, ints(&[4, 2, 1, 3, 1, 2, 8, 2]));
        assert_eq!(t.period, Some((1, 6)));
        // period detected even when few quotients are requested
        let t = cf_expand_surd(&QuadraticSurd::sqrt(19).unwrap(), 1);
        assert_eq!(t.period, Some((1, 6)));
    }

    #[test]
    fn negative_surd() {
        // -sqrt(2) = [-2; 1, 1, 2, 2, ...]
        let s = QuadraticSurd::new(int(0), int(2), int(-1)).unwrap();
        let t = cf_expand_surd(&s, 6);
        assert_eq!(t.quotients, ints(&[-2, 1, 1, 2, 2, 2]));
    }

    #[test]
    fn literal_examples() {
        let half: RealSpec = "0.5".parse().unwrap();
        assert_eq!(
            cf_expand_literal(&half, 10).unwrap().quotients,
            ints(&[0, 2])
        );
        let one: RealSpec = "1.0".parse().unwrap();
        assert_eq!(cf_expand_literal(&one, 10).unwrap().quotients, ints(&[1]));
        let pi: RealSpec = "3.14159265358979".parse().unwrap();
        let t = cf_expand_literal(&pi, 5).unwrap();
        assert_eq!(t.quotients, ints(&[3, 7, 15, 1, 292]));
        let oracle = rational_cf(pi.exact_value().unwrap().clone());
        assert_eq!(&oracle[..5], &t.quotients[..]);
    }

    #[test]
    fn truncated_literal_reports_certified_count() {
        let pi: RealSpec = "3.14159265358979...".parse().unwrap();
        match cf_expand_literal(&pi, 40) {
            Err(Error::AmbiguousExpansion { certified }) => assert!(certified >= 4, "{certified}"),
            other => panic!("{other:?}"),
        }
        let (t, stop) = cf_expand_literal_partial(&pi.enclosure(0), 40);
        assert!(stop.is_some());
        assert_eq!(&t.quotients[..4], &ints(&[3, 7, 15, 1])[..]);
    }

    #[test]
    fn table_json_uses_strings() {
        let t = cf_expand_surd(&QuadraticSurd::sqrt(2).unwrap(), 3);
        let j = serde_json::to_string(&t).unwrap();
        assert!(j.contains("\"quotients\":[\"1\",\"2\",\"2\"]"), "{j}");
        assert_eq!(serde_json::from_str::<ConvergentTable>(&j).unwrap(), t);
    }

    #[test]
    fn rational_oracle_agrees() {
        assert_eq!(rational_cf(rat(415, 93)), ints(&[4, 2, 6, 7]));
    }

    proptest! {
        #[test]
        fn determinant_identity(d in 2u32..500, count in 2usize..40) {
            prop_assume!(!crate::exact::num::is_perfect_square(&BigInt::from(d)));
            let t = cf_expand_surd(&QuadraticSurd::sqrt(d).unwrap(), count);
            for k in 1..t.len() {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                prop_assert_eq!(t.determinant(k), int(sign));
                prop_assert!(t.q(k) > t.q(k - 1) || k == 1);
                if k + 1 < t.len() {
                    prop_assert_eq!(t.q(k + 1), &(&t.quotients[k + 1] * t.q(k) + t.q(k - 1)));
                }
            }
        }

        #[test]
        fn odd_denominator_growth_is_bounded(d in 2u32..500, count in 3usize..30) {
            prop_assume!(!crate::exact::num::is_perfect_square(&BigInt::from(d)));
            let t = cf_expand_surd(&QuadraticSurd::sqrt(d).unwrap(), count);
            let m = t.max_quotient().unwrap().clone();
            let mut n = 0;
            while 2 * n + 1 < t.len() {
                prop_assert!(t.q(2 * n + 1) <= &((&m + 1) * t.q(2 * n)));
                n += 1;
            }
        }

        #[test]
        fn literal_matches_rational_oracle(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(n, d);
            let t = cf_expand_literal(&RealSpec::exact(x.clone()), 100).unwrap();
            prop_assert_eq!(&t.quotients, &rational_cf(x.clone()));
            let last = t.convergents.len() - 1;
            prop_assert_eq!(t.convergent(last), x);
        }

        #[test]
        fn metallic_surds_are_constant(b in 1u32..=50) {
            let t = cf_expand_surd(&QuadraticSurd::metallic(b).unwrap(), 100);
            prop_assert!(t.quotients.iter().all(|a| *a == BigInt::from(b)));
            prop_assert_eq!(t.period, Some((0, 1)));
        }
    }

    #[test]
    fn surd_signs() {
        assert!(QuadraticSurd::metallic(3)
            .unwrap()
            .enclosure(30)
            .is_positive());
    }
}
