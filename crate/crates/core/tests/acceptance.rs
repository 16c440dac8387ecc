//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
//! Each criterion is checked against an oracle written here, independent
//! of the library code paths it exercises.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use littlewood::cf::{
    cf_expand, cf_expand_surd, error_record, metallic_q, metallic_q_closed, QuadraticSurd,
};
use littlewood::cubic::corpus::random_cubics;
use littlewood::cubic::{cartan_bound, critical_points, solve_levelset, CubicModel};
use littlewood::exact::num::{qle, qmax, qmin, to_f64};
use littlewood::exact::{Enclosure, RealSpec};
use littlewood::forge::{critical_b, window_has_integer};
use littlewood::pipeline::{
    delta_window, littlewood_min, run_pipeline, run_stage, StageConfig, WitnessCertificate,
};
use littlewood::{Error, Precision};

type Outcome = Result<String, String>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

const CORPUS_SEED: u64 = 20240601;
const CORPUS_SIZE: usize = 1000;

fn corpus_eps() -> [BigRational; 3] {
    [rat(1, 1000), rat(1, 10), rat(1, 1)]
}

// ---------------------------------------------------------------- 1

fn bc_oracle(eta: f64) -> f64 {
    let target = 11.0 / 12.0 + eta / 4.0;
    let g = |b: f64| (b - 1.0).ln() / b.ln() - target;
    let (mut lo, mut hi) = (2.0f64, 1e6f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn threshold_table() -> Outcome {
    let rows = [
        (rat(0, 1), 6.78199),
        (rat(1, 100), 6.912),
        (rat(1, 10), 8.514),
        (rat(1, 4), 17.332),
    ];
    let mut shown = Vec::new();
    for (eta, published) in rows {
        let b = critical_b(&eta, &rat(1, 1_000_000_000)).map_err(|e| e.to_string())?;
        let v = b.to_f64();
        let oracle = bc_oracle(to_f64(&eta));
        ensure((v - published).abs() <= 1e-3, || {
            format!("eta={eta}: {v} vs {published}")
        })?;
        ensure((v - oracle).abs() <= 1e-6, || {
            format!("eta={eta}: {v} vs float oracle {oracle}")
        })?;
        shown.push(format!("{v:.5}"));
    }
    Ok(format!("b_c = {}", shown.join(", ")))
}

// ---------------------------------------------------------------- 2

fn integer_window() -> Outcome {
    let seven = BigInt::from(7);
    // 7^mu as printed in truncated form: (value, fractional digits)
    let cases = [
        (rat(0, 1), true, 5.95, 2),
        (rat(2, 125), true, 5.998, 3),
        (rat(1, 50), false, 6.01, 2),
    ];
    for (eta, want, printed, digits) in cases {
        let got = window_has_integer(&seven, &eta).map_err(|e| e.to_string())?;
        let lower = 7f64.powf(11.0 / 12.0 + to_f64(&eta) / 4.0);
        let unit = 10f64.powi(-digits);
        ensure(got == want, || format!("eta={eta}: got {got}"))?;
        ensure(lower >= printed && lower < printed + unit, || {
            format!("7^mu = {lower} vs {printed}...")
        })?;
        ensure((lower <= 6.0) == want, || {
            format!("float oracle disagrees at eta={eta}")
        })?;
    }
    Ok("7-windows at eta = 0, 2/125, 1/50 give true, true, false".into())
}

// ---------------------------------------------------------------- 3

fn metallic_denominators() -> Outcome {
    let mut compared = 0;
    for b in 1..=10i64 {
        let bb = BigInt::from(b);
        // q_0 = 1, q_1 = b, q_{n+1} = b q_n + q_{n-1}
        let mut seq = vec![BigInt::one(), bb.clone()];
        while seq.len() <= 50 {
            let k = seq.len();
            let next = &bb * &seq[k - 1] + &seq[k - 2];
            seq.push(next);
        }
        for (n, want) in seq.iter().enumerate() {
            let rec = metallic_q(&bb, n);
            let closed = metallic_q_closed(&bb, n);
            ensure(&rec == want && &closed == want, || {
                format!("b={b} n={n}: {rec} / {closed} vs {want}")
            })?;
            compared += 1;
        }
    }
    for b in 1..=50i64 {
        let s = QuadraticSurd::new(b.into(), (b * b + 4).into(), 2.into())
            .map_err(|e| e.to_string())?;
        let t = cf_expand_surd(&s, 100);
        ensure(t.quotients.len() == 100, || {
            format!("b={b}: {} quotients", t.quotients.len())
        })?;
        ensure(t.quotients.iter().all(|q| q == &BigInt::from(b)), || {
            format!("b={b}: non-constant expansion")
        })?;
    }
    Ok(format!(
        "{compared} denominators match, 50 expansions constant over 100 terms"
    ))
}

// ---------------------------------------------------------------- 4

/// Exact decision of `r <= (P + sqrt D) / Q` with `Q > 0`.
fn surd_at_least(p: &BigInt, d: &BigInt, q: &BigInt, r: &BigRational) -> bool {
    let s = r * BigRational::from_integer(q.clone()) - BigRational::from_integer(p.clone());
    if s.is_negative() {
        return true;
    }
    qle(&(&s * &s), &BigRational::from_integer(d.clone()))
}

fn error_inequalities() -> Outcome {
    let mut numbers: Vec<(String, QuadraticSurd)> = (1..=10)
        .map(|b| (format!("metallic {b}"), QuadraticSurd::metallic(b).unwrap()))
        .collect();
    numbers.push(("sqrt 2".into(), QuadraticSurd::sqrt(2).unwrap()));
    numbers.push(("sqrt 3".into(), QuadraticSurd::sqrt(3).unwrap()));
    let prec = Precision::default();
    let mut records = 0;
    for (name, s) in numbers {
        assert!(s.q().is_positive());
        let spec = RealSpec::Surd(s.clone());
        let table = cf_expand(&spec, 42).map_err(|e| e.to_string())?;
        for n in (0..=40).step_by(2) {
            let rec =
                error_record(&spec, &table, n, &prec).map_err(|e| format!("{name} n={n}: {e}"))?;
            let conv = BigRational::new(table.p(n).clone(), table.q(n).clone());
            // conv < alpha and conv + lower <= alpha <= conv + upper; alpha is
            // irrational, so no comparison can be an equality
            let at_least = |r: &BigRational| surd_at_least(s.p(), s.d(), s.q(), r);
            let exact_ok = at_least(&conv)
                && at_least(&(&conv + &rec.lower))
                && !at_least(&(&conv + &rec.upper));
            ensure(rec.verified, || {
                format!("{name} n={n}: record not certified")
            })?;
            ensure(exact_ok, || {
                format!("{name} n={n}: exact oracle rejects the bounds")
            })?;
            ensure(rec.e_n.is_positive(), || {
                format!("{name} n={n}: e_n not positive")
            })?;
            records += 1;
        }
    }
    Ok(format!("{records} records certified and confirmed exactly"))
}

// ---------------------------------------------------------------- 5-7

/// Endpoints of `{|(t-r0)(t-r1)(t-r2)| <= c}`: the critical points of the
/// shifted cubic come from bisection on its derivative, then each monotone
/// piece is bisected for both levels.
fn oracle_endpoints(roots: [f64; 3], c: f64) -> Vec<f64> {
    let mut r = roots;
    r.sort_by(f64::total_cmp);
    let shift = r[1];
    let s = [r[0] - shift, 0.0, r[2] - shift];
    let p = |u: f64| (u - s[0]) * (u - s[1]) * (u - s[2]);
    let dp = |u: f64| (u - s[1]) * (u - s[2]) + (u - s[0]) * (u - s[2]) + (u - s[0]) * (u - s[1]);
    let bisect = |f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64| -> Option<f64> {
        let fa = f(a);
        if fa == 0.0 {
            return Some(a);
        }
        if (fa < 0.0) == (f(b) < 0.0) {
            return None;
        }
        for _ in 0..2000 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if (f(m) < 0.0) == (fa < 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    };
    let c1 = bisect(&dp, s[0], s[1]).unwrap_or(s[0]);
    let c2 = bisect(&dp, s[1], s[2]).unwrap_or(s[2]);
    let far = 2.0 * c.cbrt() + 1.0;
    let pieces = [(s[0] - far, c1), (c1, c2), (c2, s[2] + far)];
    let mut out = Vec::new();
    for level in [c, -c] {
        let g = |u: f64| p(u) - level;
        for &(a, b) in &pieces {
            if let Some(u) = bisect(&g, a, b) {
                out.push(u + shift);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn float_roots(r: &[BigRational; 3]) -> [f64; 3] {
    [to_f64(&r[0]), to_f64(&r[1]), to_f64(&r[2])]
}

fn levelset_oracle() -> Outcome {
    let corpus = random_cubics(CORPUS_SEED, CORPUS_SIZE);
    let mut worst = 0f64;
    let mut endpoints = 0;
    for roots in &corpus {
        let model = CubicModel::monic(roots.clone());
        for eps in corpus_eps() {
            let set = solve_levelset(&model, &eps).map_err(|e| format!("{roots:?}: {e}"))?;
            let got: Vec<f64> = set
                .intervals
                .iter()
                .flat_map(|iv| [iv.lo.to_f64(), iv.hi.to_f64()])
                .collect();
            let want = oracle_endpoints(float_roots(roots), to_f64(&eps));
            ensure(got.len() == want.len(), || {
                format!(
                    "{:?} eps={eps}: {} endpoints vs {}",
                    float_roots(roots),
                    got.len(),
                    want.len()
                )
            })?;
            for (g, w) in got.iter().zip(&want) {
                let rel = (g - w).abs() / w.abs().max(1.0);
                worst = worst.max(rel);
                ensure(rel <= 1e-12, || {
                    format!("{:?} eps={eps}: {g} vs {w}", float_roots(roots))
                })?;
                endpoints += 1;
            }
        }
    }
    Ok(format!(
        "{endpoints} endpoints, worst relative gap {worst:.2e}"
    ))
}

fn cartan() -> Outcome {
    let corpus = random_cubics(CORPUS_SEED, CORPUS_SIZE);
    let e = std::f64::consts::E;
    let mut violations = 0;
    let mut worst = 0f64;
    for roots in &corpus {
        let model = CubicModel::monic(roots.clone());
        for eps in corpus_eps() {
            let check = cartan_bound(&model, &eps).map_err(|err| err.to_string())?;
            let bound = 6.0 * e * to_f64(&eps).cbrt();
            let ratio = check.measured.to_f64() / bound;
            worst = worst.max(ratio);
            if !check.holds || ratio > 1.0 {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    let cube = CubicModel::monic([rat(0, 1), rat(0, 1), rat(0, 1)]);
    let c = cartan_bound(&cube, &rat(1, 1)).map_err(|err| err.to_string())?;
    ensure(c.measured == Enclosure::point(rat(2, 1)), || {
        format!("t^3 measure {}", c.measured)
    })?;
    ensure(c.holds && 2.0 <= 6.0 * e, || "t^3 bound".into())?;
    Ok(format!(
        "0 violations in {} cases, largest length/bound {worst:.3}; t^3 measure 2",
        3 * corpus.len()
    ))
}

fn critical_properties() -> Outcome {
    let corpus = random_cubics(CORPUS_SEED, CORPUS_SIZE);
    let mut checked = 0;
    for roots in &corpus {
        let model = CubicModel::monic(roots.clone());
        let mut sorted = float_roots(roots);
        sorted.sort_by(f64::total_cmp);
        for eps in corpus_eps() {
            let cp = critical_points(&model, &eps).map_err(|e| e.to_string())?;
            ensure(cp.derivatives.iter().all(Enclosure::contains_zero), || {
                format!("{sorted:?}: F' misses 0")
            })?;
            ensure(cp.middle_third, || {
                format!("{sorted:?}: middle third not certified")
            })?;
            // float check of the same property
            for (tau, (l, r)) in [
                (&cp.tau_minus, (sorted[0], sorted[1])),
                (&cp.tau_plus, (sorted[1], sorted[2])),
            ] {
                let t = tau.to_f64();
                let (a, b) = ((2.0 * l + r) / 3.0, (l + 2.0 * r) / 3.0);
                let slack = 1e-9 * b.abs().max(1.0);
                ensure(t >= a - slack && t <= b + slack, || {
                    format!("{sorted:?}: tau {t} outside [{a}, {b}]")
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} cases, zero violations"))
}

// ---------------------------------------------------------------- 8

/// `(P + sqrt D)/Q` times `u1`, minus `u2`, enclosed with integer square
/// roots at `2^-k` resolution.
fn residual(s: &QuadraticSurd, u1: &BigInt, u2: &BigInt, k: u64) -> (BigRational, BigRational) {
    let scale = BigInt::one() << k;
    let root = (s.d() * u1 * u1 * &scale * &scale).sqrt();
    let sign = if u1.is_negative() { -1 } else { 1 };
    let base = (s.p() * u1 - s.q() * u2) * &scale;
    let den = s.q() * &scale;
    let (a, b) = if sign > 0 {
        (&base + &root, &base + &root + 1)
    } else {
        (&base - &root - 1, &base - &root)
    };
    (BigRational::new(a, den.clone()), BigRational::new(b, den))
}

fn interval_mul(
    x: (BigRational, BigRational),
    y: (BigRational, BigRational),
) -> (BigRational, BigRational) {
    let c = [&x.0 * &y.0, &x.0 * &y.1, &x.1 * &y.0, &x.1 * &y.1];
    let lo = c.iter().fold(&c[0], |m, v| qmin(m, v)).clone();
    let hi = c.iter().fold(&c[0], |m, v| qmax(m, v)).clone();
    (lo, hi)
}

fn certificate_sound(cert: &WitnessCertificate, a: &QuadraticSurd, b: &QuadraticSurd) -> bool {
    let [u1, u2, u3] = &cert.u;
    if u1.is_zero() {
        return false;
    }
    let k = 64 + 4 * u1.bits() + 2 * cert.bits;
    let u1q = BigRational::from_integer(u1.clone());
    let f = interval_mul(
        interval_mul((u1q.clone(), u1q), residual(a, u1, u2, k)),
        residual(b, u1, u3, k),
    );
    let positive = f.0.is_positive() || f.1.is_negative();
    let small = qle(&f.0.abs(), &cert.epsilon) && qle(&f.1.abs(), &cert.epsilon);
    positive && small
}

fn surd_of(spec: &RealSpec) -> QuadraticSurd {
    match spec {
        RealSpec::Surd(s) => s.clone(),
        _ => unreachable!("fuzz pairs are surds"),
    }
}

fn squarefree_part(mut n: u64) -> u64 {
    let mut out = 1;
    let mut p = 2;
    while p * p <= n {
        while n % (p * p) == 0 {
            n /= p * p;
        }
        if n % p == 0 {
            out *= p;
            n /= p;
        }
        p += 1;
    }
    out * n
}

fn witness_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut candidates: Vec<(RealSpec, RealSpec, u64, u64)> = Vec::new();
    for a in 1..=10u64 {
        for b in a + 1..=10 {
            candidates.push((
                RealSpec::metallic(a),
                RealSpec::metallic(b),
                a * a + 4,
                b * b + 4,
            ));
        }
    }
    for d in [2u64, 3, 5, 6, 7, 10, 11, 13] {
        for e in [2u64, 3, 5, 6, 7, 10, 11, 13] {
            if d != e {
                candidates.push((RealSpec::sqrt(d), RealSpec::sqrt(e), d, e));
            }
        }
    }
    candidates.retain(|c| squarefree_part(c.2) != squarefree_part(c.3));
    let eps_choices = [
        rat(1, 20),
        rat(1, 10),
        rat(1, 5),
        rat(1, 2),
        rat(1, 1),
        rat(2, 1),
    ];
    let (mut certificates, mut empty_windows) = (0, 0);
    let mut other_errors = Vec::new();
    for _ in 0..50 {
        let (alpha, beta, ..) = candidates[rng.gen_range(0..candidates.len())].clone();
        let n = rng.gen_range(1..=4usize);
        let cfg = StageConfig {
            epsilon: eps_choices[rng.gen_range(0..eps_choices.len())].clone(),
            delta: if rng.gen_bool(0.5) {
                Some(rat(3, 2))
            } else {
                None
            },
            multiple_cap: 2000,
            ..StageConfig::default()
        };
        let ta = cf_expand(&alpha, 2 * n + 2).map_err(|e| e.to_string())?;
        let tb = cf_expand(&beta, 2 * n + 2).map_err(|e| e.to_string())?;
        let report = match run_stage(&alpha, &beta, &ta, &tb, n, &cfg) {
            Ok(r) => r,
            Err(Error::EmptyWindow) => {
                empty_windows += 1;
                continue;
            }
            Err(e) => {
                other_errors.push(format!("{alpha}, {beta}, n={n}: {e}"));
                continue;
            }
        };
        if let Some(cert) = &report.witness {
            certificates += 1;
            let (sa, sb) = (surd_of(&alpha), surd_of(&beta));
            ensure(cert.reverify(&alpha, &beta), || {
                format!("{alpha}, {beta}, n={n}: reverification failed")
            })?;
            ensure(certificate_sound(cert, &sa, &sb), || {
                format!("{alpha}, {beta}, n={n}: unsound certificate {:?}", cert.u)
            })?;
        }
    }
    ensure(certificates > 0, || {
        "the fuzz run emitted no certificate".into()
    })?;

    let cfg = StageConfig {
        epsilon: rat(1, 10),
        ..StageConfig::default()
    };
    let (alpha, beta) = (RealSpec::metallic(6), RealSpec::metallic(7));
    let stages =
        run_pipeline(&alpha, &beta, &[1, 2, 3, 4, 5, 6], &cfg).map_err(|e| e.to_string())?;
    let mut cond2 = Vec::new();
    let mut found = 0;
    for (n, res) in stages {
        let r = res.map_err(|e| format!("(6,7) n={n}: {e}"))?;
        ensure(r.hypotheses.cond1, || format!("(6,7) n={n}: cond1 false"))?;
        cond2.push(format!("{}", r.hypotheses.cond2));
        if let Some(cert) = &r.witness {
            found += 1;
            ensure(
                certificate_sound(cert, &surd_of(&alpha), &surd_of(&beta)),
                || format!("(6,7) n={n}: unsound"),
            )?;
        }
    }
    Ok(format!(
        "{certificates} certificates sound, {empty_windows} empty windows, {} other stage errors{}; (6,7): cond1 all true, cond2 [{}], {found} witnesses",
        other_errors.len(),
        other_errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default(),
        cond2.join(",")
    ))
}

// ---------------------------------------------------------------- 9

fn delta_window_identity() -> Outcome {
    let mut points = 0;
    for i in 0..10i64 {
        let eta = rat(i, 30);
        let boundary = rat(11, 12) + &eta / BigRational::from_integer(4.into());
        let mut gammas = vec![boundary.clone()];
        for j in 1..50i64 {
            let off = rat(j * j, 10_000);
            gammas.push(&boundary + &off);
            gammas.push(&boundary - &off);
        }
        gammas.push(&boundary + rat(1, 1_000_000_007));
        assert_eq!(gammas.len(), 100);
        for g in gammas {
            // nonempty exactly when 12 gamma > 11 + 3 eta
            let twelve = BigRational::from_integer(12.into());
            let expected = &g * &twelve > BigRational::from_integer(11.into()) + &eta * rat(3, 1);
            match delta_window(&Enclosure::point(g.clone()), &eta) {
                Ok(w) => {
                    ensure(expected, || {
                        format!("gamma={g} eta={eta}: window should be empty")
                    })?;
                    let len = w.hi.lo() - &w.lo;
                    let identity = &g * rat(4, 5) - &eta * rat(1, 5) - rat(11, 15);
                    ensure(w.hi.is_point() && len == identity, || {
                        format!("gamma={g}: length {len} vs {identity}")
                    })?;
                    ensure(w.contains(&w.chosen), || {
                        format!("gamma={g}: chosen point outside")
                    })?;
                }
                Err(Error::EmptyWindow) => {
                    ensure(!expected, || format!("gamma={g} eta={eta}: window missing"))?
                }
                Err(e) => return Err(format!("gamma={g} eta={eta}: {e}")),
            }
            points += 1;
        }
    }
    Ok(format!("{points} grid points, zero misclassifications"))
}

// ---------------------------------------------------------------- 10

fn littlewood_metric() -> Outcome {
    let (a, b) = (RealSpec::sqrt(2), RealSpec::sqrt(3));
    let rows = littlewood_min(&a, &b, 10_000, &Precision::default()).map_err(|e| e.to_string())?;
    ensure(rows.len() == 10_000, || format!("{} rows", rows.len()))?;
    ensure(
        rows.windows(2)
            .all(|w| qle(&w[1].prefix_min, &w[0].prefix_min)),
        || "prefix minimum increases".into(),
    )?;
    let dist = |x: f64| (x - x.round()).abs();
    let mut best = f64::INFINITY;
    for r in &rows {
        let n = r.n as f64;
        let term = n * dist(n * 2f64.sqrt()) * dist(n * 3f64.sqrt());
        best = best.min(term);
        let got = r.term.to_f64();
        ensure((got - term).abs() <= 1e-6 * term.max(1e-6), || {
            format!("n={}: {got} vs {term}", r.n)
        })?;
    }
    let at3 = to_f64(&rows[2].prefix_min);
    ensure((at3 - 0.1110).abs() <= 1e-3, || format!("Q=3 gives {at3}"))?;
    let at_end = to_f64(&rows.last().unwrap().prefix_min);
    ensure((at_end - best).abs() <= 1e-6 * best, || {
        format!("final minimum {at_end} vs {best}")
    })?;
    Ok(format!(
        "prefix_min(3) = {at3:.4}, prefix_min(10^4) = {at_end:.3e}"
    ))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: [(u32, &str, Option<u64>, fn() -> Outcome); 10] = [
        (1, "threshold table", Some(1), threshold_table),
        (2, "integer window spot checks", Some(1), integer_window),
        (3, "metallic denominators", Some(10), metallic_denominators),
        (
            4,
            "approximation error bounds",
            Some(30),
            error_inequalities,
        ),
        (5, "level sets against bisection", Some(60), levelset_oracle),
        (6, "cube-root length bound", Some(60), cartan),
        (7, "critical point properties", None, critical_properties),
        (8, "witness soundness", None, witness_soundness),
        (9, "exponent window identity", None, delta_window_identity),
        (10, "littlewood products", Some(30), littlewood_metric),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(msg), Some(s)) if took > Duration::from_secs(s) => {
                Err(format!("{msg}; over the {s} s limit"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("criterion {id:>2} {name}: PASS ({:.2?}) {msg}", took),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2} {name}: FAIL ({:.2?}) {msg}", took);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
