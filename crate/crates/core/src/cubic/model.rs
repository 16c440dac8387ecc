use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::line::ApproxLine;
use crate::error::{Error, Result};
use crate::exact::num::{bitlen, pow2, qle, rat, rat_int};
use crate::exact::{form_value, Enclosure, RealSpec};
use crate::precision::Precision;

/// Relative width targeted for roots and the leading factor.
pub const MODEL_BITS: u64 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ModelSource {
    line: ApproxLine,
    alpha: RealSpec,
    beta: RealSpec,
    max_bits: u64,
}

/// `F(t) = -A (t - r_0)(t - r_1)(t - r_2)` with `r_0 = x_n`.
///
/// Along an approximating line, `r_1 = t_alpha` and `r_2 = t_beta` and
/// `A = e(alpha) e(beta)`; a model can also be built from any three roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicModel {
    pub n: Option<usize>,
    pub a: Enclosure,
    pub roots: [Enclosure; 3],
    pub sigma1: Enclosure,
    pub sigma2: Enclosure,
    pub sigma3: Enclosure,
    pub bits: u64,
    #[serde(skip)]
    source: Option<Arc<ModelSource>>,
}

impl CubicModel {
    pub fn from_roots(roots: [Enclosure; 3], a: Enclosure) -> Self {
        let [r0, r1, r2] = &roots;
        let sigma1 = &(r0 + r1) + r2;
        let sigma2 = &(&(r0 * r1) + &(r0 * r2)) + &(r1 * r2);
        let sigma3 = &(r0 * r1) * r2;
        CubicModel {
            n: None,
            a,
            sigma1,
            sigma2,
            sigma3,
            roots,
            bits: MODEL_BITS,
            source: None,
        }
    }

    /// Monic model (`A = 1`) with exact rational roots.
    pub fn monic(roots: [BigRational; 3]) -> Self {
        let [a, b, c] = roots;
        Self::from_roots(
            [
                Enclosure::point(a),
                Enclosure::point(b),
                Enclosure::point(c),
            ],
            Enclosure::point(BigRational::one()),
        )
    }

    pub fn x_n(&self) -> &Enclosure {
        &self.roots[0]
    }

    pub fn t_alpha(&self) -> &Enclosure {
        &self.roots[1]
    }

    pub fn t_beta(&self) -> &Enclosure {
        &self.roots[2]
    }

    /// The monic polynomial `p = -F / A` at an enclosed argument.
    pub fn p_enc(&self, t: &Enclosure) -> Enclosure {
        let [r0, r1, r2] = &self.roots;
        &(&(t - r0) * &(t - r1)) * &(t - r2)
    }

    pub fn p_at(&self, t: &BigRational) -> Enclosure {
        self.p_enc(&Enclosure::point(t.clone()))
    }

    pub fn f_at(&self, t: &BigRational) -> Enclosure {
        -(&self.a * &self.p_at(t))
    }

    pub fn f_enc(&self, t: &Enclosure) -> Enclosure {
        -(&self.a * &self.p_enc(t))
    }

    /// `p'(t) = 3t^2 - 2 sigma1 t + sigma2`.
    pub fn dp_enc(&self, t: &Enclosure) -> Enclosure {
        let three = rat(3, 1);
        &(&t.square().scale(&three) - &(&self.sigma1 * t).scale(&rat(2, 1))) + &self.sigma2
    }

    pub fn df_enc(&self, t: &Enclosure) -> Enclosure {
        -(&self.a * &self.dp_enc(t))
    }

    /// `epsilon / A`, the level of the monic polynomial.
    pub fn level(&self, epsilon: &BigRational) -> Result<Enclosure> {
        Enclosure::point(epsilon.clone())
            .checked_div(&self.a)
            .filter(|_| self.a.is_positive())
            .ok_or_else(|| Error::BranchUndecidable("leading factor not certified positive".into()))
    }

    /// The same model rebuilt at twice the precision, when it came from a
    /// line and the ceiling allows it.
    pub fn refined(&self) -> Option<Result<CubicModel>> {
        let src = self.source.as_ref()?;
        let bits = self.bits * 2;
        if bits > src.max_bits {
            return None;
        }
        Some(build_at(
            &src.line,
            &src.alpha,
            &src.beta,
            bits,
            src.max_bits,
        ))
    }
}

fn rel_ok(e: &Enclosure, bits: u64) -> bool {
    let scale = qmax_abs(e).max(BigRational::one());
    qle(&(e.width() * rat_int(pow2(bits))), &scale)
}

fn qmax_abs(e: &Enclosure) -> BigRational {
    let (a, b) = (e.lo().abs(), e.hi().abs());
    if qle(&a, &b) {
        b
    } else {
        a
    }
}

fn build_at(
    line: &ApproxLine,
    alpha: &RealSpec,
    beta: &RealSpec,
    bits: u64,
    max_bits: u64,
) -> Result<CubicModel> {
    let (ae, be) = (alpha.enclosure(bits), beta.enclosure(bits));
    let e_a = ae.add_rat(&-line.dir_alpha());
    let e_b = be.add_rat(&-line.dir_beta());
    let m = &line.base;
    let xr = rat_int(m.x.clone());
    let res_a = ae.scale(&xr).add_rat(&-rat_int(m.y.clone()));
    let res_b = be.scale(&xr).add_rat(&-rat_int(m.z.clone()));
    let undecided =
        || Error::PrecisionExhausted("approximation error not separated from zero".into());
    // t_a - x = (x p_a / q_a - y) / e_a, so the root coincides with x
    // exactly when the base point lies on the convergent direction
    let t_a = if &m.x * &line.p_a == &m.y * &line.q_a {
        Enclosure::point(xr.clone())
    } else {
        res_a.checked_div(&e_a).ok_or_else(undecided)?
    };
    let t_b = if &m.x * &line.p_b == &m.z * &line.q_b {
        Enclosure::point(xr.clone())
    } else {
        res_b.checked_div(&e_b).ok_or_else(undecided)?
    };
    let a = &e_a * &e_b;
    let mut model = CubicModel::from_roots([Enclosure::point(xr), t_a, t_b], a);
    model.n = Some(line.n);
    model.bits = bits;
    model.source = Some(Arc::new(ModelSource {
        line: line.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        max_bits: max_bits,
    }));
    Ok(model)
}

/// Builds `F(t) = f(v(t))` along `line`, with roots and `A` enclosed to
/// about `MODEL_BITS` relative bits, and cross-checks the factored form
/// against direct evaluation of `f` at `t = 0`, `x_n` and `q_a q_b`.
pub fn build_cubic(
    line: &ApproxLine,
    alpha: &RealSpec,
    beta: &RealSpec,
    prec: &Precision,
) -> Result<CubicModel> {
    let refinable = alpha.refinable() || beta.refinable();
    let scale = 4 * bitlen(&(&line.q_a * &line.q_b)) + 2 * bitlen(&line.base.x);
    let p = prec.with_start(prec.start_bits + MODEL_BITS + scale);
    let max_bits = p.levels().last().unwrap_or(p.start_bits);
    let model = p.refine(refinable, "cubic model", |bits| {
        let m = match build_at(line, alpha, beta, bits, max_bits) {
            Ok(m) => m,
            Err(Error::PrecisionExhausted(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let a_ok = m.a.is_positive() && {
            let rel = m.a.width() * rat_int(pow2(MODEL_BITS));
            qle(&rel, m.a.lo())
        };
        let roots_ok = m.roots.iter().all(|r| rel_ok(r, MODEL_BITS));
        Ok((a_ok && roots_ok).then_some(m))
    })?;
    let samples = [
        BigRational::zero(),
        rat_int(line.base.x.clone()),
        rat_int(&line.q_a * &line.q_b),
    ];
    let (ae, be) = (alpha.enclosure(model.bits), beta.enclosure(model.bits));
    for t in &samples {
        let direct = form_value(&line.point_at(t), &ae, &be);
        let factored = model.f_at(t);
        if !direct.overlaps(&factored) {
            return Err(Error::Undecidable(format!(
                "factored cubic disagrees with the form at t = {t}"
            )));
        }
    }
    Ok(model)
}
