use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::sync::mpsc;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use littlewood::cf::{
    bad_approx_estimate, cf_expand, cf_expand_literal_partial, error_record, ConvergentTable,
};
use littlewood::cubic::corpus::{float_sublevel, random_cubics};
use littlewood::cubic::{cartan_bound, critical_points, solve_levelset, CubicModel};
use littlewood::exact::num::{to_decimal, to_f64};
use littlewood::exact::RealSpec;
use littlewood::forge::{
    critical_b, enumerate_pairs, scan_pairs, write_csv, write_jsonl, FactorBudget,
};
use littlewood::pipeline::{
    append_witness_log, littlewood_min, run_stage, StageConfig, StageOutcome,
};
use littlewood::{Error, Precision};

use crate::args::{
    BcArgs, CartanArgs, CfArgs, Format, LiminfArgs, NumberSel, PairScanArgs, WitnessArgs,
};

fn select(n: &NumberSel) -> Result<RealSpec> {
    Ok(match (n.metallic, n.sqrt, &n.literal, &n.real) {
        (Some(b), ..) => {
            if b == 0 {
                bail!("--metallic needs b >= 1");
            }
            RealSpec::metallic(b)
        }
        (_, Some(d), ..) => RealSpec::sqrt(d),
        (_, _, Some(s), _) => s.parse::<RealSpec>()?,
        (_, _, _, Some(r)) => r.clone(),
        _ => bail!("no number given"),
    })
}

fn open_out(path: &std::path::Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

pub fn cf(a: CfArgs) -> Result<u8> {
    let x = select(&a.number)?;
    let table: ConvergentTable = match &x {
        RealSpec::Literal { .. } => {
            let (t, stop) = cf_expand_literal_partial(&x.enclosure(0), a.count);
            if let Some(e) = stop {
                eprintln!("note: {e}");
            }
            t
        }
        _ => cf_expand(&x, a.count)?,
    };
    let prec = Precision::from_env()?;
    let mut records = Vec::new();
    if a.records {
        let mut n = 0;
        while n + 1 < table.len() {
            records.push(error_record(&x, &table, n, &prec)?);
            n += 2;
        }
    }
    let estimate = match a.estimate {
        Some(q) => Some((q, bad_approx_estimate(&x, q, &prec)?)),
        None => None,
    };
    let mut out = io::stdout().lock();
    match a.format {
        Format::Json => {
            let mut v = json!({ "table": table });
            if a.records {
                v["records"] = serde_json::to_value(&records)?;
            }
            if let Some((q, e)) = &estimate {
                v["estimate"] = json!({ "kind": "empirical", "q_max": q, "value": e.to_string() });
            }
            writeln!(out, "{v}")?;
        }
        Format::Table => {
            let qs: Vec<String> = table.quotients.iter().map(BigInt::to_string).collect();
            writeln!(out, "quotients: [{}]", qs.join(","))?;
            if let Some((pre, per)) = table.period {
                writeln!(out, "period: preperiod {pre}, length {per}")?;
            }
            writeln!(out, "k\ta_k\tp_k\tq_k")?;
            for k in 0..table.len() {
                writeln!(
                    out,
                    "{k}\t{}\t{}\t{}",
                    table.quotients[k],
                    table.p(k),
                    table.q(k)
                )?;
            }
            if a.records {
                writeln!(out, "n\te_n\tlower\tupper\tverified")?;
                for r in &records {
                    writeln!(
                        out,
                        "{}\t{:.6e}\t{:.6e}\t{:.6e}\t{}",
                        r.n,
                        r.e_n.to_f64(),
                        to_f64(&r.lower),
                        to_f64(&r.upper),
                        r.verified
                    )?;
                }
            }
            if let Some((q, e)) = &estimate {
                writeln!(
                    out,
                    "empirical min q||qx|| over q <= {q}: {}",
                    to_decimal(e, 12)
                )?;
            }
        }
    }
    Ok(0)
}

pub fn witness(a: WitnessArgs, prec: Precision) -> Result<u8> {
    let (alpha, beta) = a.pair.resolve().map_err(anyhow::Error::msg)?;
    let cfg = StageConfig {
        eta: a.eta,
        epsilon: a.eps,
        delta: a.delta,
        multiple_cap: a.cap,
        prec,
    };
    let ns: Vec<usize> = a.n.0.clone().collect();
    let count = 2 * ns.last().copied().unwrap_or(0) + 2;
    let ta = cf_expand(&alpha, count)?;
    let tb = cf_expand(&beta, count)?;

    let (tx, rx) = mpsc::channel();
    let mut any_witness = false;
    let mut any_error = false;
    std::thread::scope(|s| -> Result<()> {
        s.spawn(|| {
            ns.par_iter().for_each_with(tx, |tx, &n| {
                let _ = tx.send((n, run_stage(&alpha, &beta, &ta, &tb, n, &cfg)));
            });
        });
        let mut pending = BTreeMap::new();
        let mut next = ns.iter().copied();
        let mut want = next.next();
        let mut out = io::stdout().lock();
        for (n, res) in rx {
            pending.insert(n, res);
            while let Some(res) = want.and_then(|w| pending.remove(&w)) {
                let n = want.expect("checked");
                let line = match res {
                    Ok(report) => {
                        if let Some(cert) = &report.witness {
                            any_witness = true;
                            if let Some(path) = &a.log {
                                append_witness_log(path, cert)
                                    .with_context(|| format!("writing {}", path.display()))?;
                            }
                        }
                        debug_assert_eq!(
                            report.witness.is_some(),
                            matches!(
                                report.outcome,
                                StageOutcome::Witness | StageOutcome::ImmediateWitness
                            )
                        );
                        serde_json::to_string(&report)?
                    }
                    Err(e) => {
                        any_error = true;
                        json!({ "n": n, "error": e.to_string() }).to_string()
                    }
                };
                writeln!(out, "{line}")?;
                out.flush()?;
                want = next.next();
            }
        }
        Ok(())
    })?;
    Ok(if any_witness {
        0
    } else if any_error {
        1
    } else {
        2
    })
}

pub fn bc_table(a: BcArgs) -> Result<u8> {
    let rows: Vec<(BigRational, Result<_, Error>)> = a
        .eta
        .par_iter()
        .map(|eta| (eta.clone(), critical_b(eta, &a.tol)))
        .collect();
    let mut out = io::stdout().lock();
    writeln!(out, "eta,b_c")?;
    for (eta, b) in rows {
        let b = b?;
        writeln!(out, "{},{}", to_f64(&eta), to_decimal(&b.mid(), 9))?;
    }
    Ok(0)
}

pub fn pair_scan(a: PairScanArgs) -> Result<u8> {
    let pairs = enumerate_pairs(&a.eta, &BigInt::from(a.bmax))?;
    let ns: Vec<usize> = a.n.0.clone().collect();
    let budget = FactorBudget {
        rho_iterations: a.rho_iterations,
        ..FactorBudget::default()
    };
    let reports = scan_pairs(&pairs, &ns, &a.eta, &budget)?;
    match &a.jsonl {
        Some(p) => write_jsonl(open_out(p)?, &reports)?,
        None => write_jsonl(io::stdout().lock(), &reports)?,
    }
    if let Some(p) = &a.csv {
        let mut w = open_out(p)?;
        write_csv(&mut w, &reports)?;
        w.flush()?;
    }
    eprintln!("{} pairs, {} reports", pairs.len(), reports.len());
    Ok(0)
}

pub fn liminf(a: LiminfArgs, prec: Precision) -> Result<u8> {
    let (alpha, beta) = a.pair.resolve().map_err(anyhow::Error::msg)?;
    let rows = littlewood_min(&alpha, &beta, a.q_max, &prec)?;
    let mut csv: Box<dyn Write> = match &a.csv {
        Some(p) => Box::new(open_out(p)?),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(csv, "n,term,prefix_min")?;
    for r in &rows {
        writeln!(
            csv,
            "{},{},{}",
            r.n,
            to_decimal(r.term.hi(), 12),
            to_decimal(&r.prefix_min, 12)
        )?;
    }
    csv.flush()?;
    if let Some(p) = &a.plot {
        let mut w = open_out(p)?;
        writeln!(w, "# n prefix_min")?;
        for r in &rows {
            writeln!(w, "{} {:.12e}", r.n, to_f64(&r.prefix_min))?;
        }
        w.flush()?;
    }
    Ok(0)
}

#[derive(Default, Serialize)]
struct CartanSummary {
    cubics: usize,
    seed: u64,
    epsilons: Vec<String>,
    checks: usize,
    cartan_violations: usize,
    derivative_violations: usize,
    middle_third_violations: usize,
    shape_mismatches: usize,
    oracle_mismatches: usize,
    undecidable: usize,
    max_relative_error: f64,
    worst_bound_ratio: f64,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    cartan: usize,
    derivative: usize,
    middle: usize,
    shape: usize,
    oracle: usize,
    undecidable: usize,
    max_rel: f64,
    worst_ratio: f64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.checks += o.checks;
        self.cartan += o.cartan;
        self.derivative += o.derivative;
        self.middle += o.middle;
        self.shape += o.shape;
        self.oracle += o.oracle;
        self.undecidable += o.undecidable;
        self.max_rel = self.max_rel.max(o.max_rel);
        self.worst_ratio = self.worst_ratio.max(o.worst_ratio);
        self
    }
}

fn check_one(roots: &[BigRational; 3], eps: &BigRational) -> Result<Tally> {
    let mut t = Tally {
        checks: 1,
        ..Tally::default()
    };
    let model = CubicModel::monic(roots.clone());
    let (set, crit, cartan) = match (
        solve_levelset(&model, eps),
        critical_points(&model, eps),
        cartan_bound(&model, eps),
    ) {
        (Ok(s), Ok(c), Ok(k)) => (s, c, k),
        (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => match e {
            Error::Undecidable(_) | Error::BranchUndecidable(_) | Error::PrecisionExhausted(_) => {
                t.undecidable = 1;
                return Ok(t);
            }
            e => return Err(e.into()),
        },
    };
    t.cartan = usize::from(!cartan.holds);
    t.worst_ratio = set.total_length.to_f64() / cartan.bound.to_f64();
    t.derivative = usize::from(!crit.derivatives.iter().all(|d| d.contains_zero()));
    t.middle = usize::from(!crit.middle_third);
    t.shape = usize::from(crit.interval_count() != set.intervals.len());
    let reference = float_sublevel(roots.clone().map(|r| to_f64(&r)), to_f64(eps));
    if reference.len() != set.intervals.len() {
        t.oracle = 1;
        return Ok(t);
    }
    for (iv, (lo, hi)) in set.intervals.iter().zip(&reference) {
        for (got, want) in [(iv.lo.to_f64(), *lo), (iv.hi.to_f64(), *hi)] {
            let rel = (got - want).abs() / want.abs().max(1.0);
            t.max_rel = t.max_rel.max(rel);
            if rel > 1e-12 {
                t.oracle = 1;
            }
        }
    }
    Ok(t)
}

pub fn cartan_check(a: CartanArgs) -> Result<u8> {
    let cubics = random_cubics(a.seed, a.count);
    let jobs: Vec<(&[BigRational; 3], &BigRational)> = cubics
        .iter()
        .flat_map(|c| a.eps.iter().map(move |e| (c, e)))
        .collect();
    let tally = jobs
        .par_iter()
        .map(|(c, e)| check_one(c, e))
        .try_reduce(Tally::default, |x, y| Ok(x.merge(y)))?;
    let summary = CartanSummary {
        cubics: cubics.len(),
        seed: a.seed,
        epsilons: a.eps.iter().map(ToString::to_string).collect(),
        checks: tally.checks,
        cartan_violations: tally.cartan,
        derivative_violations: tally.derivative,
        middle_third_violations: tally.middle,
        shape_mismatches: tally.shape,
        oracle_mismatches: tally.oracle,
        undecidable: tally.undecidable,
        max_relative_error: tally.max_rel,
        worst_bound_ratio: tally.worst_ratio,
    };
    println!("{}", serde_json::to_string(&summary)?);
    let bad = tally.cartan
        + tally.derivative
        + tally.middle
        + tally.shape
        + tally.oracle
        + tally.undecidable;
    Ok(if bad == 0 { 0 } else { 2 })
}
