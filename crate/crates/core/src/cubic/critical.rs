use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::levelset::{exceed_flags, shape, solve_levelset, Shape};
use super::model::CubicModel;
use crate::error::{Error, Result};
use crate::exact::num::{qle, rat};
use crate::exact::{euler_enclosure, root_enclosure, Enclosure};

/// Local extrema of `F` and the resulting shape of `{|F| <= epsilon}`.
///
/// Scenarios: 1 when neither extreme value exceeds epsilon in size,
/// 2 when only `|F(tau-)|` does, 3 when only `|F(tau+)|` does, 4 when both
/// do. The sublevel set then has 1, 2, 2 and 3 intervals respectively.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoints {
    pub tau_minus: Enclosure,
    pub tau_plus: Enclosure,
    /// `F(tau-)`, `F(tau+)`
    pub values: [Enclosure; 2],
    /// `F'(tau-)`, `F'(tau+)`; both contain zero.
    pub derivatives: [Enclosure; 2],
    pub scenario: u8,
    /// Each critical point is certified to lie in the closed middle third
    /// of the two roots around it.
    pub middle_third: bool,
}

impl CriticalPoints {
    pub fn interval_count(&self) -> usize {
        match self.scenario {
            1 => 1,
            4 => 3,
            _ => 2,
        }
    }
}

fn in_middle_third(tau: &Enclosure, left: &Enclosure, right: &Enclosure) -> bool {
    let third = rat(1, 3);
    let lo = (&left.scale(&rat(2, 1)) + right).scale(&third);
    let hi = (left + &right.scale(&rat(2, 1))).scale(&third);
    qle(lo.hi(), tau.lo()) && qle(tau.hi(), hi.lo())
}

fn critical_once(model: &CubicModel, epsilon: &BigRational) -> Result<CriticalPoints> {
    let level = model.level(epsilon)?;
    let Some(sh) = shape(model)? else {
        return Err(Error::InvalidArgument(
            "triple root has no separate critical points".into(),
        ));
    };
    let (up, down) = exceed_flags(&sh, &level)?;
    let Shape {
        sorted,
        tau_minus,
        tau_plus,
        ..
    } = sh;
    let scenario = match (up, down) {
        (false, false) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (true, true) => 4,
    };
    let middle_third = in_middle_third(&tau_minus, &sorted[0], &sorted[1])
        && in_middle_third(&tau_plus, &sorted[1], &sorted[2]);
    Ok(CriticalPoints {
        values: [model.f_enc(&tau_minus), model.f_enc(&tau_plus)],
        derivatives: [model.df_enc(&tau_minus), model.df_enc(&tau_plus)],
        scenario,
        middle_third,
        tau_minus,
        tau_plus,
    })
}

/// Critical points `tau+- = (sigma1 +- sqrt(sigma1^2 - 3 sigma2)) / 3`,
/// the values of `F` there, and the scenario for `epsilon`.
pub fn critical_points(model: &CubicModel, epsilon: &BigRational) -> Result<CriticalPoints> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let mut m = model.clone();
    loop {
        match critical_once(&m, epsilon) {
            Err(Error::BranchUndecidable(msg)) => match m.refined() {
                Some(next) => m = next?,
                None => return Err(Error::Undecidable(msg)),
            },
            other => return other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanCheck {
    /// `6e (epsilon / A)^(1/3)`
    pub bound: Enclosure,
    pub measured: Enclosure,
    pub holds: bool,
}

/// Compares the length of `{|F| <= epsilon}` with `6e (epsilon/A)^(1/3)`.
pub fn cartan_bound(model: &CubicModel, epsilon: &BigRational) -> Result<CartanCheck> {
    let set = solve_levelset(model, epsilon)?;
    let bits = model.bits + 32;
    let level = &set.level;
    let cbrt = Enclosure::new(
        root_enclosure(level.lo(), 3, bits).lo().clone(),
        root_enclosure(level.hi(), 3, bits).hi().clone(),
    );
    let bound = (&euler_enclosure(bits) * &cbrt).scale(&rat(6, 1));
    let holds = qle(set.total_length.hi(), bound.lo());
    Ok(CartanCheck {
        bound,
        measured: set.total_length,
        holds,
    })
}
