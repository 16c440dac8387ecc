use std::cmp::Ordering;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::model::CubicModel;
use crate::error::{Error, Result};
use crate::exact::num::{rat, to_f64};
use crate::exact::Enclosure;

/// Which closed form gives the real solutions of `4z^3 - 3z = C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|C| < 1`: three solutions `cos((arccos C + 2 pi k) / 3)`.
    Cos,
    /// `|C| > 1`: one solution `sgn(C) cosh(arccosh |C| / 3)`.
    Cosh,
}

/// Depressed form of `F(t) = -/+ epsilon` under `t = y + sigma1 / 3`:
/// `y^3 + P y = Q(+/-)`, with `Q(+/-) = (2 sigma1^3 - 9 sigma1 sigma2)/27
/// + sigma3 +/- epsilon / A` and `C(+/-) = (3/|P|)^(3/2) Q(+/-) / 2`.
///
/// `Q(+)` is the level `p = +epsilon/A`, that is `F = -epsilon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedCubic {
    pub p: Enclosure,
    pub q_plus: Enclosure,
    pub q_minus: Enclosure,
    pub c_plus: Enclosure,
    pub c_minus: Enclosure,
    pub branch_plus: Branch,
    pub branch_minus: Branch,
}

fn q0(model: &CubicModel) -> Enclosure {
    let s1 = &model.sigma1;
    let cube = s1.powi(3).scale(&rat(2, 1));
    let mixed = (s1 * &model.sigma2).scale(&rat(9, 1));
    &(&cube - &mixed).scale(&rat(1, 27)) + &model.sigma3
}

/// `(3 sigma2 - sigma1^2) / 3`.
pub fn depressed_p(model: &CubicModel) -> Enclosure {
    (&model.sigma2.scale(&rat(3, 1)) - &model.sigma1.square()).scale(&rat(1, 3))
}

fn branch_of(c: &Enclosure) -> Result<Branch> {
    match c.abs().cmp_rat(&rat(1, 1)) {
        Some(Ordering::Less) => Ok(Branch::Cos),
        Some(Ordering::Greater) => Ok(Branch::Cosh),
        _ => Err(Error::BranchUndecidable(format!("|C| straddles 1: {c}"))),
    }
}

fn reduce_once(model: &CubicModel, epsilon: &BigRational) -> Result<ReducedCubic> {
    let p = depressed_p(model);
    if !p.is_negative() {
        return Err(Error::BranchUndecidable(
            "P is not certified negative (roots not certified distinct)".into(),
        ));
    }
    let level = model.level(epsilon)?;
    let base = q0(model);
    let q_plus = &base + &level;
    let q_minus = &base - &level;
    let ratio = Enclosure::point(rat(3, 1))
        .checked_div(&p.abs())
        .expect("P is nonzero");
    let factor = &ratio * &ratio.sqrt(model.bits + 64).expect("positive");
    let c_plus = (&factor * &q_plus).scale(&rat(1, 2));
    let c_minus = (&factor * &q_minus).scale(&rat(1, 2));
    Ok(ReducedCubic {
        branch_plus: branch_of(&c_plus)?,
        branch_minus: branch_of(&c_minus)?,
        p,
        q_plus,
        q_minus,
        c_plus,
        c_minus,
    })
}

/// Depressed form with its branch per level, refining a line-built model
/// when `|C|` cannot be separated from 1.
pub fn reduce_cubic(model: &CubicModel, epsilon: &BigRational) -> Result<ReducedCubic> {
    let mut m = model.clone();
    loop {
        match reduce_once(&m, epsilon) {
            Err(Error::BranchUndecidable(msg)) => match m.refined() {
                Some(next) => m = next?,
                None => return Err(Error::BranchUndecidable(msg)),
            },
            other => return other,
        }
    }
}

/// Real solutions of `y^3 + P y = K` by the trigonometric or hyperbolic
/// closed form, in floating point. Heuristic seeds only.
pub fn trig_solutions(p: f64, k: f64) -> Vec<f64> {
    if !(p < 0.0) || !p.is_finite() || !k.is_finite() {
        return vec![k.cbrt()];
    }
    let h = 2.0 * (-p / 3.0).sqrt();
    let c = 0.5 * (3.0 / -p).powf(1.5) * k;
    if c.abs() <= 1.0 {
        let theta = c.acos();
        let tau = std::f64::consts::TAU;
        let mut out: Vec<f64> = (0..3)
            .map(|j| h * ((theta - tau * j as f64) / 3.0).cos())
            .collect();
        out.sort_by(f64::total_cmp);
        out
    } else {
        let z = c.signum() * (c.abs().acosh() / 3.0).cosh();
        vec![h * z]
    }
}

/// Floating-point seeds for `p(t) = c`, computed on the roots shifted by
/// `sigma1 / 3` to limit cancellation.
pub fn level_seeds(model: &CubicModel, c: f64) -> Vec<f64> {
    let shift = model.sigma1.mid() * rat(1, 3);
    let ys: Vec<f64> = model
        .roots
        .iter()
        .map(|r| to_f64(&(r.mid() - &shift)))
        .collect();
    let p = ys[0] * ys[1] + ys[0] * ys[2] + ys[1] * ys[2];
    let q0 = -ys[0] * ys[1] * ys[2];
    let s = to_f64(&shift);
    trig_solutions(p, c - q0)
        .into_iter()
        .map(|y| y + s)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::rat;

    #[test]
    fn roots_one_two_four() {
        let m = CubicModel::monic([rat(1, 1), rat(2, 1), rat(4, 1)]);
        assert_eq!(depressed_p(&m), Enclosure::point(rat(-7, 3)));
        let r = reduce_cubic(&m, &rat(1, 10)).unwrap();
        assert_eq!(r.branch_plus, Branch::Cos);
        assert_eq!(r.branch_minus, Branch::Cos);
    }

    #[test]
    fn symmetric_roots() {
        let m = CubicModel::monic([rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let r = reduce_cubic(&m, &rat(0, 1)).unwrap();
        assert_eq!(r.p, Enclosure::point(rat(-1, 1)));
        assert_eq!(r.q_plus, Enclosure::point(rat(0, 1)));
        assert!(r.c_plus.contains(&rat(0, 1)));
    }

    #[test]
    fn zero_level_seeds_reproduce_roots() {
        let m = CubicModel::monic([rat(1, 1), rat(2, 1), rat(4, 1)]);
        let s = level_seeds(&m, 0.0);
        for (got, want) in s.iter().zip([1.0, 2.0, 4.0]) {
            assert!((got - want).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn clustered_roots_use_cosh_branch() {
        let m = CubicModel::monic([rat(1, 1), rat(11, 10), rat(12, 10)]);
        let r = reduce_cubic(&m, &rat(1, 1)).unwrap();
        assert_eq!(r.branch_plus, Branch::Cosh);
        assert_eq!(r.branch_minus, Branch::Cosh);
    }

    #[test]
    fn triple_root_has_no_reduced_branch() {
        let m = CubicModel::monic([rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert!(matches!(
            reduce_cubic(&m, &rat(1, 1)),
            Err(Error::BranchUndecidable(_))
        ));
    }

    #[test]
    fn triple_angle_identities() {
        for k in 0..50 {
            let th = k as f64 * 0.07;
            let (c, ch) = (th.cos(), th.cosh());
            assert!(((3.0 * th).cos() - (4.0 * c * c * c - 3.0 * c)).abs() < 1e-12);
            assert!(
                ((3.0 * th).cosh() - (4.0 * ch * ch * ch - 3.0 * ch)).abs() < 1e-9 * ch.powi(3)
            );
        }
    }
}
