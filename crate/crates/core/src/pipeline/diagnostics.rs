use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::cubic::{depressed_p, reduce_cubic, ApproxLine, Branch, CubicModel, SublevelSet};
use crate::exact::num::{qle, rat, rat_int, to_f64};
use crate::exact::serde_num::RatStr;
use crate::exact::{pow_rational, Enclosure};

const DIAG_BITS: u64 = 96;

/// Lower bounds on the length of the rightmost interval when both levels
/// are on the cosine branch (three intervals).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthChain {
    pub interval_length: Enclosure,
    /// `|C(+) - C(-)|` from the reduced cubic.
    pub c_gap: Enclosure,
    /// `3 sqrt(3) epsilon / ((-P)^(3/2) A)`
    pub c_gap_closed: Enclosure,
    pub identity_holds: bool,
    /// `sqrt(-P/3) |arccos^2 C(+) - arccos^2 C(-)| / 36`, floating point.
    pub phi_bound: f64,
    /// `sqrt(-P) |C(+) - C(-)|^2 / (36 sqrt 3)`
    pub c_bound: Enclosure,
    /// `interval_length >= c_bound`, certified.
    pub holds: bool,
}

/// Size of the cubic's coefficients against the powers of `q_b` they are
/// expected to grow like. Reported, never asserted.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaDiagnostics {
    #[serde_as(as = "RatStr")]
    pub delta: BigRational,
    /// `sigma1 / q_b^delta`
    pub sigma1_ratio: Enclosure,
    /// `sigma2 / (q_b^(2(1+gamma) - delta) + q_b^(2 + delta/2))`
    pub sigma2_ratio: Enclosure,
    /// `sigma3 / q_b^(2(1+gamma))`, with `q_b^gamma = q_a`
    pub sigma3_ratio: Enclosure,
    /// `-P / q_b^(2 delta)`
    pub neg_p_ratio: Enclosure,
    /// Length of the rightmost interval over `l`.
    pub length_ratio: Enclosure,
    /// `3 + 4 gamma - eta - 5 delta`
    pub growth_exponent: Enclosure,
    pub chain: Option<LengthChain>,
}

fn div(a: &Enclosure, b: &Enclosure) -> Enclosure {
    a.checked_div(b).expect("positive denominator")
}

/// `|arccos^2 x - arccos^2 y|` and `|x - y|^2` for `x, y` in `[-1, 1]`.
pub fn arccos_square_gap(x: f64, y: f64) -> (f64, f64) {
    let (a, b) = (x.acos(), y.acos());
    ((a * a - b * b).abs(), (x - y) * (x - y))
}

fn length_chain(
    model: &CubicModel,
    epsilon: &BigRational,
    set: &SublevelSet,
) -> Option<LengthChain> {
    if set.intervals.len() != 3 {
        return None;
    }
    let red = reduce_cubic(model, epsilon).ok()?;
    if red.branch_plus != Branch::Cos || red.branch_minus != Branch::Cos {
        return None;
    }
    let bits = model.bits + 32;
    let neg_p = -&red.p;
    let root_p = neg_p.sqrt(bits)?;
    let sqrt3 = Enclosure::from_int(3).sqrt(bits)?;
    let c_gap = (&red.c_plus - &red.c_minus).abs();
    let denom = &(&neg_p * &root_p) * &model.a;
    let c_gap_closed = sqrt3.scale(&(epsilon * rat(3, 1))).checked_div(&denom)?;
    let c_bound = div(&(&root_p * &c_gap.square()), &sqrt3.scale(&rat(36, 1)));
    let interval_length = set.intervals[2].length();
    let (cp, cm) = (
        red.c_plus.to_f64().clamp(-1.0, 1.0),
        red.c_minus.to_f64().clamp(-1.0, 1.0),
    );
    let phi_bound = (to_f64(&neg_p.mid()) / 3.0).sqrt() * arccos_square_gap(cp, cm).0 / 36.0;
    Some(LengthChain {
        identity_holds: c_gap.overlaps(&c_gap_closed),
        holds: qle(c_bound.hi(), interval_length.lo()),
        interval_length,
        c_gap,
        c_gap_closed,
        phi_bound,
        c_bound,
    })
}

/// Ratios of the symmetric functions, of `-P` and of the interval length
/// to the powers of `q_b` that bound them.
pub fn sigma_diagnostics(
    line: &ApproxLine,
    model: &CubicModel,
    gamma: &Enclosure,
    eta: &BigRational,
    delta: &BigRational,
    set: &SublevelSet,
) -> SigmaDiagnostics {
    let qb = rat_int(line.q_b.clone());
    let qaqb2 = Enclosure::point(rat_int((&line.q_a * &line.q_b).pow(2u32)));
    let qb_delta = pow_rational(&qb, delta, DIAG_BITS);
    let qb_half = pow_rational(&qb, &(delta * rat(1, 2)), DIAG_BITS);
    let qb2 = Enclosure::point(&qb * &qb);
    let s2_scale = &div(&qaqb2, &qb_delta) + &(&qb2 * &qb_half);
    let neg_p = -&depressed_p(model);
    let l = Enclosure::point(rat_int(line.lcm()));
    let last = set
        .intervals
        .last()
        .map(|iv| iv.length())
        .unwrap_or_else(Enclosure::zero);
    let growth_exponent = gamma
        .scale(&rat(4, 1))
        .add_rat(&(rat(3, 1) - eta - delta * rat(5, 1)));
    SigmaDiagnostics {
        delta: delta.clone(),
        sigma1_ratio: div(&model.sigma1, &qb_delta),
        sigma2_ratio: div(&model.sigma2, &s2_scale),
        sigma3_ratio: div(&model.sigma3, &qaqb2),
        neg_p_ratio: div(&neg_p, &qb_delta.square()),
        length_ratio: div(&last, &l),
        growth_exponent,
        chain: length_chain(model, &set.epsilon, set),
    }
}
