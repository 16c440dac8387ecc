use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::diagnostics::{sigma_diagnostics, SigmaDiagnostics};
use super::hypotheses::{
    check_hypotheses, delta_window, floor_power, DeltaWindow, HypothesisReport,
};
use super::witness::{verify_witness, Provenance, WitnessCertificate};
use crate::cf::{cf_expand, ConvergentTable};
use crate::cubic::{
    build_cubic, build_line, critical_points, solve_levelset, CubicModel, LevelInterval,
    SublevelSet,
};
use crate::dirichlet::{classify_point, find_dirichlet_point, Classification, DirichletPoint};
use crate::error::{Error, Result};
use crate::exact::num::{ceil, floor, rat};
use crate::exact::serde_num::RatStr;
use crate::exact::RealSpec;
use crate::precision::Precision;

/// Default cap on the multiples of `l` tried in one interval.
pub const MULTIPLE_CAP: u64 = 1_000_000;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageConfig {
    #[serde_as(as = "RatStr")]
    pub eta: BigRational,
    #[serde_as(as = "RatStr")]
    pub epsilon: BigRational,
    /// Overrides the exponent chosen inside the window. The stage then
    /// runs even when the window is empty.
    #[serde_as(as = "Option<RatStr>")]
    pub delta: Option<BigRational>,
    pub multiple_cap: u64,
    #[serde(skip, default)]
    pub prec: Precision,
}

impl Default for StageConfig {
    fn default() -> Self {
        StageConfig {
            eta: BigRational::zero(),
            epsilon: rat(1, 10),
            delta: None,
            multiple_cap: MULTIPLE_CAP,
            prec: Precision::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageOutcome {
    /// The simultaneous approximation point itself is a witness.
    ImmediateWitness,
    /// A multiple of `l` in the selected interval gave a witness.
    Witness,
    /// Every interval contains `x_n` or cannot be separated from it.
    NoFreeInterval,
    NoMultipleInInterval,
    /// Multiples were found but none certified.
    NoCertifiedCandidate,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub n: usize,
    pub hypotheses: HypothesisReport,
    pub window: Option<DeltaWindow>,
    #[serde_as(as = "RatStr")]
    pub delta: BigRational,
    #[serde(rename = "N")]
    #[serde_as(as = "DisplayFromStr")]
    pub range: BigInt,
    pub point: DirichletPoint,
    pub classification: Classification,
    pub model: CubicModel,
    pub levelset: SublevelSet,
    pub scenario: Option<u8>,
    /// Interval holding `x_n`.
    pub x_interval: Option<usize>,
    pub selected_interval: Option<usize>,
    /// Values `t = k l` certified inside the selected interval.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub multiples_found: Vec<BigInt>,
    /// More multiples existed than the cap allowed.
    pub truncated: bool,
    pub witness: Option<WitnessCertificate>,
    pub diagnostics: SigmaDiagnostics,
    pub outcome: StageOutcome,
}

/// Multiples of `l` certified inside `iv`, at most `cap` of them.
pub fn multiples_in(iv: &LevelInterval, l: &BigInt, cap: u64) -> (Vec<BigInt>, bool) {
    let lo = ceil(&(iv.lo.hi() / BigRational::from_integer(l.clone())));
    let hi = floor(&(iv.hi.lo() / BigRational::from_integer(l.clone())));
    if hi < lo {
        return (Vec::new(), false);
    }
    let count = &hi - &lo + 1;
    let truncated = count > BigInt::from(cap);
    let mut out = Vec::new();
    let mut k = lo;
    while k <= hi && (out.len() as u64) < cap {
        out.push(&k * l);
        k += 1;
    }
    (out, truncated)
}

/// One stage of the search at index `2n`: bound, approximation point,
/// cubic, sublevel set, then the multiples of `l` in an interval away from
/// `x_n`.
pub fn run_stage(
    alpha: &RealSpec,
    beta: &RealSpec,
    tbl_alpha: &ConvergentTable,
    tbl_beta: &ConvergentTable,
    n: usize,
    cfg: &StageConfig,
) -> Result<StageReport> {
    let eps = &cfg.epsilon;
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let hypotheses = check_hypotheses(tbl_alpha, tbl_beta, n, &cfg.eta)?;
    let (window, delta) = match &cfg.delta {
        Some(d) => (delta_window(&hypotheses.gamma, &cfg.eta).ok(), d.clone()),
        None => {
            let w = delta_window(&hypotheses.gamma, &cfg.eta)?;
            let d = w.chosen.clone();
            (Some(w), d)
        }
    };
    if !delta.is_positive() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let range = floor_power(&hypotheses.q_b, &delta)?;
    let point = find_dirichlet_point(alpha, beta, &range, &cfg.prec)?;
    let classification = classify_point(&point, alpha, beta, eps, &cfg.prec)?;
    let line = build_line(&point, tbl_alpha, tbl_beta, n)?;
    let model = build_cubic(&line, alpha, beta, &cfg.prec)?;
    let levelset = solve_levelset(&model, eps)?;
    let scenario = critical_points(&model, eps).ok().map(|c| c.scenario);
    let diagnostics = sigma_diagnostics(
        &line,
        &model,
        &hypotheses.gamma,
        &cfg.eta,
        &delta,
        &levelset,
    );
    let x_interval = levelset.containing(model.x_n());
    let l = hypotheses.l.clone();
    let mut report = StageReport {
        n,
        hypotheses,
        window,
        delta,
        range,
        point,
        classification,
        model,
        levelset,
        scenario,
        x_interval,
        selected_interval: None,
        multiples_found: Vec::new(),
        truncated: false,
        witness: None,
        diagnostics,
        outcome: StageOutcome::NoFreeInterval,
    };
    if let Classification::ImmediateWitness { .. } = report.classification {
        if let Ok(mut cert) = verify_witness(&report.point.coords(), alpha, beta, eps, &cfg.prec) {
            cert.t = Some(BigInt::zero());
            cert.provenance = Some(Provenance {
                n,
                l,
                k: BigInt::zero(),
            });
            report.witness = Some(cert);
            report.outcome = StageOutcome::ImmediateWitness;
            return Ok(report);
        }
    }
    let x_n = report.model.x_n().clone();
    let Some(j) = report
        .levelset
        .intervals
        .iter()
        .position(|iv| iv.excludes(&x_n))
    else {
        return Ok(report);
    };
    report.selected_interval = Some(j);
    let (multiples, truncated) = multiples_in(&report.levelset.intervals[j], &l, cfg.multiple_cap);
    report.truncated = truncated;
    report.multiples_found = multiples;
    if report.multiples_found.is_empty() {
        report.outcome = StageOutcome::NoMultipleInInterval;
        return Ok(report);
    }
    let line = build_line(&report.point, tbl_alpha, tbl_beta, n)?;
    let found = report.multiples_found.par_iter().find_map_first(|t| {
        let u = line.lattice_point(t)?;
        let mut cert = verify_witness(&u, alpha, beta, eps, &cfg.prec).ok()?;
        let (k, _) = t.div_rem(&l);
        cert.t = Some(t.clone());
        cert.provenance = Some(Provenance { n, l: l.clone(), k });
        Some(cert)
    });
    report.outcome = if found.is_some() {
        StageOutcome::Witness
    } else {
        StageOutcome::NoCertifiedCandidate
    };
    report.witness = found;
    Ok(report)
}

/// Runs the stages `n` in `ns` in parallel, in order of `n`.
pub fn run_pipeline(
    alpha: &RealSpec,
    beta: &RealSpec,
    ns: &[usize],
    cfg: &StageConfig,
) -> Result<Vec<(usize, Result<StageReport>)>> {
    let count = 2 * ns.iter().copied().max().unwrap_or(0) + 2;
    let ta = cf_expand(alpha, count)?;
    let tb = cf_expand(beta, count)?;
    Ok(ns
        .par_iter()
        .map(|&n| (n, run_stage(alpha, beta, &ta, &tb, n, cfg)))
        .collect())
}
