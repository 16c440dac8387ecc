use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::model::CubicModel;
use super::reduced::level_seeds;
use crate::error::{Error, Result};
use crate::exact::num::{
    bits_for_width, ceil, dyadic, floor, from_f64, pow2, qle, qlt, rat, rat_int, round_half_up,
    to_f64,
};
use crate::exact::serde_num::RatStr;
use crate::exact::{root_enclosure, Enclosure};

/// Endpoint width target, relative to `max(1, |t|)`, as a power of two.
pub const ENDPOINT_BITS: u64 = 100;

/// Endpoint tolerance on `|F(t)| - epsilon`, relative to epsilon.
pub fn endpoint_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u32).pow(20))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelInterval {
    pub lo: Enclosure,
    pub hi: Enclosure,
}

impl LevelInterval {
    fn point(e: Enclosure) -> Self {
        LevelInterval {
            lo: e.clone(),
            hi: e,
        }
    }

    pub fn length(&self) -> Enclosure {
        &self.hi - &self.lo
    }

    /// Certified: the whole enclosure `x` lies inside the interval.
    pub fn contains(&self, x: &Enclosure) -> bool {
        qle(self.lo.hi(), x.lo()) && qle(x.hi(), self.hi.lo())
    }

    /// Certified: `x` lies outside the interval.
    pub fn excludes(&self, x: &Enclosure) -> bool {
        qlt(x.hi(), self.lo.lo()) || qlt(self.hi.hi(), x.lo())
    }
}

/// `{t : |F(t)| <= epsilon}` as sorted disjoint closed intervals.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublevelSet {
    pub intervals: Vec<LevelInterval>,
    #[serde_as(as = "RatStr")]
    pub epsilon: BigRational,
    /// `epsilon / A`
    pub level: Enclosure,
    pub total_length: Enclosure,
    /// `|F(tau-)| > epsilon` and `|F(tau+)| > epsilon`, when defined.
    pub exceeds: Option<(bool, bool)>,
}

impl SublevelSet {
    /// Index of the interval certified to contain `x`.
    pub fn containing(&self, x: &Enclosure) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.contains(x))
    }
}

/// Shape data shared by level sets and critical points.
#[derive(Clone, Debug)]
pub(crate) struct Shape {
    pub sorted: [Enclosure; 3],
    pub tau_minus: Enclosure,
    pub tau_plus: Enclosure,
    pub p_minus: Enclosure,
    pub p_plus: Enclosure,
}

/// Roots in increasing order. Identical exact roots are allowed; roots
/// whose enclosures merely overlap are refused.
pub(crate) fn sort_roots(model: &CubicModel) -> Result<[Enclosure; 3]> {
    let mut r = model.roots.clone();
    let cmp = |a: &Enclosure, b: &Enclosure| -> Result<Ordering> {
        if a.is_point() && a == b {
            return Ok(Ordering::Equal);
        }
        a.cmp_enc(b)
            .ok_or_else(|| Error::BranchUndecidable(format!("roots {a} and {b} not separated")))
    };
    for i in 0..3 {
        for j in 0..2 - i {
            if cmp(&r[j], &r[j + 1])? == Ordering::Greater {
                r.swap(j, j + 1);
            }
        }
    }
    cmp(&r[0], &r[2])?;
    Ok(r)
}

pub(crate) fn shape(model: &CubicModel) -> Result<Option<Shape>> {
    let sorted = sort_roots(model)?;
    let disc = &model.sigma1.square() - &model.sigma2.scale(&rat(3, 1));
    if disc.is_point() && disc.lo().is_zero() {
        return Ok(None);
    }
    if !disc.is_positive() {
        return Err(Error::BranchUndecidable(
            "critical discriminant not certified positive".into(),
        ));
    }
    let sq = disc.sqrt(model.bits + 64).expect("positive");
    let tau_minus = (&model.sigma1 - &sq).scale(&rat(1, 3));
    let tau_plus = (&model.sigma1 + &sq).scale(&rat(1, 3));
    Ok(Some(Shape {
        p_minus: model.p_enc(&tau_minus),
        p_plus: model.p_enc(&tau_plus),
        sorted,
        tau_minus,
        tau_plus,
    }))
}

/// `(M > L, m < -L)` for the local maximum `M` and minimum `m` of `p`.
pub(crate) fn exceed_flags(shape: &Shape, level: &Enclosure) -> Result<(bool, bool)> {
    let undecided =
        |what: &str| Error::BranchUndecidable(format!("critical value {what} against the level"));
    let up = match shape.p_minus.cmp_enc(level) {
        Some(o) => o == Ordering::Greater,
        None => return Err(undecided("at tau-")),
    };
    let down = match shape.p_plus.cmp_enc(&-level) {
        Some(o) => o == Ordering::Less,
        None => return Err(undecided("at tau+")),
    };
    Ok((up, down))
}

fn cube_root_bound(level: &Enclosure) -> BigInt {
    ceil(level.hi()).nth_root(3) + 2
}

/// Solves `p(t) = c` on `[a, b]` where `p` is monotone, by safeguarded
/// Newton steps from `seed` with certified bracketing. The returned
/// enclosure always contains the crossing.
fn crossing(
    model: &CubicModel,
    c: &Enclosure,
    mut a: BigRational,
    mut b: BigRational,
    increasing: bool,
    seed: Option<f64>,
    tol: &BigRational,
) -> Result<Enclosure> {
    let scale = {
        let m = if qlt(&a.abs(), &b.abs()) {
            b.abs()
        } else {
            a.abs()
        };
        if qlt(&m, &BigRational::one()) {
            BigRational::one()
        } else {
            m
        }
    };
    let target = &scale / rat_int(pow2(ENDPOINT_BITS));
    let grid = bits_for_width(&target) + 16;
    if let Some(gc) = GridCubic::new(model, c, grid, increasing, tol) {
        if let Some(e) = gc.crossing(&a, &b, seed, &target) {
            return Ok(e);
        }
    }
    let s = if increasing {
        BigRational::one()
    } else {
        -BigRational::one()
    };
    let h = |t: &BigRational| (&model.p_at(t) - c).scale(&s);
    let (mut ha, mut hb) = (h(&a), h(&b));
    if !ha.is_negative() || !hb.is_positive() {
        return Err(Error::BranchUndecidable(
            "crossing bracket not certified".into(),
        ));
    }
    let snap = |t: BigRational| dyadic(round_half_up(&(t * rat_int(pow2(grid)))), grid);
    let mut x = seed
        .and_then(from_f64)
        .map(snap)
        .filter(|t| qlt(&a, t) && qlt(t, &b))
        .unwrap_or_else(|| snap((&a + &b) * rat(1, 2)));
    let small = |e: &Enclosure| qle(&e.abs().hi().clone(), tol);
    for _ in 0..4000 {
        let w = &b - &a;
        if qle(&w, &target) && small(&ha) && small(&hb) {
            break;
        }
        if !(qlt(&a, &x) && qlt(&x, &b)) {
            x = snap((&a + &b) * rat(1, 2));
            if !(qlt(&a, &x) && qlt(&x, &b)) {
                break;
            }
        }
        let hx = h(&x);
        match hx.signum() {
            Some(-1) => {
                a = x.clone();
                ha = hx.clone();
            }
            Some(1) => {
                b = x.clone();
                hb = hx.clone();
            }
            Some(_) => return Ok(Enclosure::point(x)),
            None => break,
        }
        let d = model.dp_enc(&Enclosure::point(x.clone())).mid() * &s;
        let newton = if d.is_zero() {
            None
        } else {
            Some(snap(&x - hx.mid() / d))
        };
        match newton {
            Some(xn) if qlt(&a, &xn) && qlt(&xn, &b) => {
                let step = (&xn - &x).abs();
                if qlt(&(&step * rat(4, 1)), &w) {
                    // probe both sides of the Newton estimate
                    let guard = if qlt(&step, &(&target / rat(8, 1))) {
                        &target / rat(8, 1)
                    } else {
                        step * rat(2, 1)
                    };
                    for probe in [snap(&xn - &guard), snap(&xn + &guard)] {
                        if qlt(&a, &probe) && qlt(&probe, &b) {
                            let hp = h(&probe);
                            match hp.signum() {
                                Some(-1) => {
                                    a = probe;
                                    ha = hp;
                                }
                                Some(1) => {
                                    b = probe;
                                    hb = hp;
                                }
                                _ => {}
                            }
                        }
                    }
                }
                x = xn;
            }
            _ => x = snap((&a + &b) * rat(1, 2)),
        }
    }
    Ok(Enclosure::new(a, b))
}

/// `s (p(t) - c)` for exact roots and an exact level, on the grid
/// `t = k / 2^g`. Values are integers over the fixed denominator `den`, so
/// no rational normalization happens inside the iteration.
struct GridCubic {
    g: u64,
    d: BigInt,
    /// `r_i d 2^g`
    roots: [BigInt; 3],
    c_den: BigInt,
    /// `c d^3 2^(3g) c_den`
    c_term: BigInt,
    den: BigInt,
    increasing: bool,
    tol_lhs: BigInt,
    tol_rhs: BigInt,
}

impl GridCubic {
    fn new(
        model: &CubicModel,
        c: &Enclosure,
        g: u64,
        increasing: bool,
        tol: &BigRational,
    ) -> Option<Self> {
        if !c.is_point() || !model.roots.iter().all(Enclosure::is_point) {
            return None;
        }
        let d = model
            .roots
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.lo().denom()));
        let roots = [0, 1, 2].map(|i| {
            let r = model.roots[i].lo();
            (r.numer() * (&d / r.denom())) << g
        });
        let den_p = d.pow(3) << (3 * g);
        let c = c.lo();
        let den = &den_p * c.denom();
        Some(GridCubic {
            g,
            roots,
            c_den: c.denom().clone(),
            c_term: c.numer() * &den_p,
            tol_lhs: tol.denom().clone(),
            tol_rhs: tol.numer() * &den,
            den,
            d,
            increasing,
        })
    }

    fn value(&self, k: &BigInt) -> BigInt {
        let kd = k * &self.d;
        let prod = (&kd - &self.roots[0]) * (&kd - &self.roots[1]) * (&kd - &self.roots[2]);
        let v = prod * &self.c_den - &self.c_term;
        if self.increasing {
            v
        } else {
            -v
        }
    }

    fn small(&self, v: &BigInt) -> bool {
        v.abs() * &self.tol_lhs <= self.tol_rhs
    }

    /// Approximate Newton step `h(k) / h'(k)` in grid units.
    fn newton_step(&self, k: &BigInt, v: &BigInt) -> Option<BigInt> {
        let unit = &self.d << self.g;
        let kd = k * &self.d;
        let e =
            [0, 1, 2].map(|i| to_f64(&BigRational::new_raw(&kd - &self.roots[i], unit.clone())));
        let mut slope = e[0] * e[1] + e[0] * e[2] + e[1] * e[2];
        if !self.increasing {
            slope = -slope;
        }
        let h = to_f64(&BigRational::new_raw(v.clone(), self.den.clone()));
        let step = h / slope * 2f64.powi(self.g as i32);
        if !step.is_finite() {
            return None;
        }
        BigInt::from_f64(step.round())
    }

    fn crossing(
        &self,
        a: &BigRational,
        b: &BigRational,
        seed: Option<f64>,
        target: &BigRational,
    ) -> Option<Enclosure> {
        let g = self.g;
        let unit = rat_int(pow2(g));
        let (mut ka, mut kb) = (ceil(&(a * &unit)), floor(&(b * &unit)));
        if ka >= kb {
            return None;
        }
        let (mut va, mut vb) = (self.value(&ka), self.value(&kb));
        if !va.is_negative() || !vb.is_positive() {
            return None;
        }
        let span = floor(&(target * &unit)).max(BigInt::one());
        let guard_min = (&span >> 3u32).max(BigInt::one());
        let mid = |ka: &BigInt, kb: &BigInt| (ka + kb) >> 1u32;
        let inside = |x: &BigInt, ka: &BigInt, kb: &BigInt| ka < x && x < kb;
        let mut x = seed
            .and_then(|s| BigInt::from_f64((s * 2f64.powi(g as i32)).round()))
            .filter(|x| inside(x, &ka, &kb))
            .unwrap_or_else(|| mid(&ka, &kb));
        for _ in 0..4000 {
            let w = &kb - &ka;
            if w <= span && self.small(&va) && self.small(&vb) {
                break;
            }
            if !inside(&x, &ka, &kb) {
                x = mid(&ka, &kb);
                if !inside(&x, &ka, &kb) {
                    break;
                }
            }
            let vx = self.value(&x);
            match vx.sign() {
                Sign::Minus => (ka, va) = (x.clone(), vx.clone()),
                Sign::Plus => (kb, vb) = (x.clone(), vx.clone()),
                Sign::NoSign => return Some(Enclosure::point(dyadic(x, g))),
            }
            let next = self.newton_step(&x, &vx).map(|st| (&x - &st, st));
            match next {
                Some((xn, st)) if inside(&xn, &ka, &kb) => {
                    if st.abs() * 4u32 < w {
                        // probe both sides of the Newton estimate
                        let guard: BigInt = (st.abs() * 2u32).max(guard_min.clone());
                        for probe in [&xn - &guard, &xn + &guard] {
                            if inside(&probe, &ka, &kb) {
                                let vp = self.value(&probe);
                                match vp.sign() {
                                    Sign::Minus => (ka, va) = (probe, vp),
                                    Sign::Plus => (kb, vb) = (probe, vp),
                                    Sign::NoSign => {}
                                }
                            }
                        }
                    }
                    x = xn;
                }
                _ => x = mid(&ka, &kb),
            }
        }
        Some(Enclosure::new(dyadic(ka, g), dyadic(kb, g)))
    }
}

fn pick_seed(seeds: &[f64], a: &BigRational, b: &BigRational) -> Option<f64> {
    let (fa, fb) = (to_f64(a), to_f64(b));
    seeds
        .iter()
        .copied()
        .find(|s| s.is_finite() && *s > fa && *s < fb)
}

fn solve_once(model: &CubicModel, epsilon: &BigRational) -> Result<SublevelSet> {
    if epsilon.is_negative() {
        return Err(Error::InvalidArgument(
            "epsilon must be non-negative".into(),
        ));
    }
    let level = model.level(epsilon)?;
    let finish = |intervals: Vec<LevelInterval>, exceeds| {
        let total_length = intervals
            .iter()
            .fold(Enclosure::zero(), |acc, iv| &acc + &iv.length());
        SublevelSet {
            intervals,
            epsilon: epsilon.clone(),
            level: level.clone(),
            total_length,
            exceeds,
        }
    };
    if epsilon.is_zero() {
        let sorted = sort_roots(model)?;
        let mut out: Vec<LevelInterval> = Vec::new();
        for r in sorted {
            if out.last().map_or(true, |iv| iv.lo != r) {
                out.push(LevelInterval::point(r));
            }
        }
        return Ok(finish(out, None));
    }
    let tol = level.lo() * endpoint_tolerance();
    let Some(sh) = shape(model)? else {
        // triple root: p(t) = (t - r)^3 is monotone
        let r = model.roots[0].clone();
        let bits = model.bits + 64;
        let lo_root = root_enclosure(level.lo(), 3, bits);
        let hi_root = root_enclosure(level.hi(), 3, bits);
        let k = Enclosure::new(lo_root.lo().clone(), hi_root.hi().clone());
        let iv = LevelInterval {
            lo: &r - &k,
            hi: &r + &k,
        };
        return Ok(finish(vec![iv], None));
    };
    let (up, down) = exceed_flags(&sh, &level)?;
    let bound = rat_int(cube_root_bound(&level));
    let left = rat_int(floor(sh.sorted[0].lo())) - &bound;
    let right = rat_int(ceil(sh.sorted[2].hi())) + &bound;
    let tm = sh.tau_minus.mid();
    let tp = sh.tau_plus.mid();
    let neg = -&level;
    let seeds_hi = level_seeds(model, to_f64(&level.mid()));
    let seeds_lo = level_seeds(model, -to_f64(&level.mid()));
    let cross = |c: &Enclosure, seeds: &[f64], a: &BigRational, b: &BigRational, inc: bool| {
        crossing(
            model,
            c,
            a.clone(),
            b.clone(),
            inc,
            pick_seed(seeds, a, b),
            &tol,
        )
    };
    let mut bounds = vec![cross(&neg, &seeds_lo, &left, &tm, true)?];
    if up {
        bounds.push(cross(&level, &seeds_hi, &left, &tm, true)?);
        bounds.push(cross(&level, &seeds_hi, &tm, &tp, false)?);
    }
    if down {
        bounds.push(cross(&neg, &seeds_lo, &tm, &tp, false)?);
        bounds.push(cross(&neg, &seeds_lo, &tp, &right, true)?);
    }
    bounds.push(cross(&level, &seeds_hi, &tp, &right, true)?);
    let intervals: Vec<LevelInterval> = bounds
        .chunks(2)
        .map(|c| LevelInterval {
            lo: c[0].clone(),
            hi: c[1].clone(),
        })
        .collect();
    for w in intervals.windows(2) {
        if w[0].hi.cmp_enc(&w[1].lo) != Some(Ordering::Less) {
            return Err(Error::BranchUndecidable(
                "level-set intervals not separated".into(),
            ));
        }
    }
    Ok(finish(intervals, Some((up, down))))
}

/// The sublevel set `{t : |F(t)| <= epsilon}` as one to three intervals.
///
/// Each monotone piece of `F` between its critical points is crossed at
/// most once per level `+/- epsilon`; seeds from the trigonometric closed
/// form are polished into certified enclosures by bracketed Newton steps.
/// With `epsilon = 0` the result is the roots as point intervals.
pub fn solve_levelset(model: &CubicModel, epsilon: &BigRational) -> Result<SublevelSet> {
    let mut m = model.clone();
    loop {
        match solve_once(&m, epsilon) {
            Err(Error::BranchUndecidable(msg)) => match m.refined() {
                Some(next) => m = next?,
                None => return Err(Error::BranchUndecidable(msg)),
            },
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::rat;
    use proptest::prelude::*;

    /// Reference: crossings of p(t) = c by plain bisection on a sign grid.
    fn bisection_crossings(roots: [f64; 3], c: f64, lo: f64, hi: f64) -> Vec<f64> {
        let p = |t: f64| (t - roots[0]) * (t - roots[1]) * (t - roots[2]) - c;
        let steps = 200_000;
        let mut out = Vec::new();
        let mut prev = lo;
        for k in 1..=steps {
            let t = lo + (hi - lo) * k as f64 / steps as f64;
            if (p(prev) < 0.0) != (p(t) < 0.0) {
                let (mut a, mut b) = (prev, t);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if (p(m) < 0.0) == (p(a) < 0.0) {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                out.push(0.5 * (a + b));
            }
            prev = t;
        }
        out
    }

    fn endpoints(s: &SublevelSet) -> Vec<f64> {
        s.intervals
            .iter()
            .flat_map(|iv| [iv.lo.to_f64(), iv.hi.to_f64()])
            .collect()
    }

    #[test]
    fn three_separate_intervals() {
        let m = CubicModel::monic([rat(1, 1), rat(2, 1), rat(4, 1)]);
        let s = solve_levelset(&m, &rat(1, 10)).unwrap();
        assert_eq!(s.intervals.len(), 3);
        let mut oracle = bisection_crossings([1.0, 2.0, 4.0], 0.1, -2.0, 7.0);
        oracle.extend(bisection_crossings([1.0, 2.0, 4.0], -0.1, -2.0, 7.0));
        oracle.sort_by(f64::total_cmp);
        for (got, want) in endpoints(&s).iter().zip(&oracle) {
            assert!(
                (got - want).abs() < 1e-12 * want.abs().max(1.0),
                "{got} {want}"
            );
        }
        for (k, r) in [1, 2, 4].iter().enumerate() {
            assert_eq!(s.containing(&Enclosure::from_int(*r)), Some(k));
        }
    }

    #[test]
    fn clustered_roots_single_interval() {
        let m = CubicModel::monic([rat(1, 1), rat(11, 10), rat(12, 10)]);
        let s = solve_levelset(&m, &rat(1, 1)).unwrap();
        assert_eq!(s.intervals.len(), 1);
        let lo = bisection_crossings([1.0, 1.1, 1.2], -1.0, -5.0, 5.0);
        let hi = bisection_crossings([1.0, 1.1, 1.2], 1.0, -5.0, 5.0);
        assert_eq!((lo.len(), hi.len()), (1, 1));
        let e = endpoints(&s);
        assert!((e[0] - lo[0]).abs() < 1e-12 && (e[1] - hi[0]).abs() < 1e-12);
    }

    #[test]
    fn zero_epsilon_gives_roots() {
        let m = CubicModel::monic([rat(4, 1), rat(1, 1), rat(2, 1)]);
        let s = solve_levelset(&m, &rat(0, 1)).unwrap();
        let e = endpoints(&s);
        assert_eq!(e, vec![1.0, 1.0, 2.0, 2.0, 4.0, 4.0]);
        assert!(s.total_length.is_point() && s.total_length.lo().is_zero());
    }

    #[test]
    fn shrinking_epsilon_shrinks_intervals() {
        let m = CubicModel::monic([rat(1, 1), rat(2, 1), rat(4, 1)]);
        let mut prev: Option<BigRational> = None;
        for k in 1..8 {
            let eps = BigRational::new(1.into(), BigInt::from(10).pow(k));
            let s = solve_levelset(&m, &eps).unwrap();
            let len = s.total_length.hi().clone();
            if let Some(p) = prev {
                assert!(len < p);
            }
            prev = Some(len);
        }
    }

    #[test]
    fn triple_root_cartan_case() {
        let m = CubicModel::monic([rat(0, 1), rat(0, 1), rat(0, 1)]);
        let s = solve_levelset(&m, &rat(1, 1)).unwrap();
        assert_eq!(s.intervals.len(), 1);
        assert_eq!(s.total_length, Enclosure::point(rat(2, 1)));
    }

    #[test]
    fn double_root() {
        let m = CubicModel::monic([rat(0, 1), rat(0, 1), rat(3, 1)]);
        let s = solve_levelset(&m, &rat(1, 100)).unwrap();
        let mut oracle = bisection_crossings([0.0, 0.0, 3.0], 0.01, -2.0, 5.0);
        oracle.extend(bisection_crossings([0.0, 0.0, 3.0], -0.01, -2.0, 5.0));
        oracle.sort_by(f64::total_cmp);
        let e = endpoints(&s);
        assert_eq!(e.len(), oracle.len());
        for (got, want) in e.iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-9, "{got} {want}");
        }
    }

    #[test]
    fn endpoints_certified_within_tolerance() {
        let m = CubicModel::monic([rat(-3, 1), rat(1, 7), rat(5, 2)]);
        let eps = rat(1, 3);
        let s = solve_levelset(&m, &eps).unwrap();
        let tol = &eps * endpoint_tolerance();
        for iv in &s.intervals {
            for e in [&iv.lo, &iv.hi] {
                for t in [e.lo(), e.hi()] {
                    let f = m.f_at(t).abs();
                    assert!(qle(&(f.hi() - &eps).abs(), &tol));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_bisection(r in proptest::array::uniform3(-200i64..200), e in 1i64..2000) {
            let roots = [rat(r[0], 4), rat(r[1], 4), rat(r[2], 4)];
            prop_assume!(r[0] != r[1] && r[1] != r[2] && r[0] != r[2]);
            let m = CubicModel::monic(roots);
            let eps = rat(e, 100);
            let s = match solve_levelset(&m, &eps) {
                Ok(s) => s,
                Err(Error::BranchUndecidable(_)) => return Ok(()),
                Err(err) => return Err(TestCaseError::fail(format!("{err}"))),
            };
            let rf = [r[0] as f64 / 4.0, r[1] as f64 / 4.0, r[2] as f64 / 4.0];
            let ef = e as f64 / 100.0;
            let mut oracle = bisection_crossings(rf, ef, -120.0, 120.0);
            oracle.extend(bisection_crossings(rf, -ef, -120.0, 120.0));
            oracle.sort_by(f64::total_cmp);
            let got = endpoints(&s);
            prop_assert_eq!(got.len(), oracle.len());
            for (g, w) in got.iter().zip(&oracle) {
                prop_assert!((g - w).abs() < 1e-9 * w.abs().max(1.0), "{} vs {}", g, w);
            }
        }
    }
}
