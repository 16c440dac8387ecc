use std::cmp::Ordering;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::factor::{factorize, FactorBudget, Factorization};
use super::pairs::MetallicPair;
use crate::cf::metallic_q;
use crate::error::Result;
use crate::exact::serde_num::RatStr;
use crate::exact::{ln_int, Enclosure};
use crate::pipeline::hypotheses_for;

/// Prime decompositions of `q_2n(alpha)` and `q_2n(beta)` and the lcm
/// conditions read off them.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationReport {
    #[serde_as(as = "DisplayFromStr")]
    pub a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub b: BigInt,
    pub n: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub q_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q_b: BigInt,
    pub factors_a: Factorization,
    pub factors_b: Factorization,
    #[serde_as(as = "DisplayFromStr")]
    pub l: BigInt,
    /// Union of the primes of both denominators, increasing.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub primes: Vec<BigInt>,
    /// Positions in `primes` where the exponent in `q_a` exceeds the one in `q_b`.
    pub i_n: Vec<usize>,
    pub r_n: usize,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub gpf_a: Option<BigInt>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub gpf_b: Option<BigInt>,
    #[serde_as(as = "RatStr")]
    pub eta: BigRational,
    pub eta_min: Enclosure,
    /// `q_b^(11/12 + eta/4) <= q_a <= q_b`
    pub cond1: bool,
    /// `l <= q_b^(1 + eta)`, exact.
    pub cond2: bool,
    /// `|I_n| max (a_i - b_i) <= eta r_n ln p_1 min b_i / ln p_r`; unknown
    /// while a cofactor is unfactored or the comparison is undecided.
    pub sufficient: Option<bool>,
}

fn exponent(f: &Factorization, p: &BigInt) -> u32 {
    f.factors
        .iter()
        .find(|(q, _)| q == p)
        .map_or(0, |(_, e)| *e)
}

fn sufficient_condition(
    primes: &[BigInt],
    ea: &[u32],
    eb: &[u32],
    i_n: &[usize],
    eta: &BigRational,
) -> Option<bool> {
    let max_gap = i_n.iter().map(|&i| ea[i] - eb[i]).max().unwrap_or(0);
    let lhs = BigInt::from(i_n.len() as u64 * max_gap as u64);
    if lhs.is_zero() {
        return Some(true);
    }
    let min_b = eb.iter().copied().min().unwrap_or(0);
    if min_b == 0 || eta.is_zero() {
        return Some(false);
    }
    let r = primes.len();
    // lhs ln p_r <= eta r min_b ln p_1
    let k = eta * BigRational::from_integer(BigInt::from(r as u64 * min_b as u64));
    let (p1, pr) = (&primes[0], &primes[r - 1]);
    if p1 == pr {
        return Some(BigRational::from_integer(lhs) <= k);
    }
    let mut bits = 64;
    while bits <= 4096 {
        let left = ln_int(pr, bits).scale(&BigRational::from_integer(lhs.clone()));
        let right = ln_int(p1, bits).scale(&k);
        match left.cmp_enc(&right) {
            Some(Ordering::Greater) => return Some(false),
            Some(_) => return Some(true),
            None => bits *= 2,
        }
    }
    None
}

/// Factors both denominators of index `2n` and evaluates the lcm
/// condition exactly and through its sufficient prime-exponent form.
pub fn lcm_condition(
    pair: &MetallicPair,
    n: usize,
    eta: &BigRational,
    budget: &FactorBudget,
) -> Result<FactorizationReport> {
    let (q_a, q_b) = pair.denominators(n);
    let hyp = hypotheses_for(n, &q_a, &q_b, eta)?;
    let (fa, fb) = rayon::join(|| factorize(&q_a, budget), || factorize(&q_b, budget));
    let complete = fa.is_complete() && fb.is_complete();
    let mut primes: Vec<BigInt> = fa
        .factors
        .iter()
        .chain(&fb.factors)
        .map(|(p, _)| p.clone())
        .collect();
    primes.sort();
    primes.dedup();
    let ea: Vec<u32> = primes.iter().map(|p| exponent(&fa, p)).collect();
    let eb: Vec<u32> = primes.iter().map(|p| exponent(&fb, p)).collect();
    let i_n: Vec<usize> = (0..primes.len()).filter(|&i| ea[i] > eb[i]).collect();
    let sufficient = if complete {
        sufficient_condition(&primes, &ea, &eb, &i_n, eta)
    } else {
        None
    };
    Ok(FactorizationReport {
        a: pair.a.clone(),
        b: pair.b.clone(),
        n,
        gpf_a: fa.greatest_prime().cloned(),
        gpf_b: fb.greatest_prime().cloned(),
        l: hyp.l.clone(),
        r_n: primes.len(),
        q_a,
        q_b,
        factors_a: fa,
        factors_b: fb,
        primes,
        i_n,
        eta: eta.clone(),
        eta_min: hyp.eta_min,
        cond1: hyp.cond1,
        cond2: hyp.cond2,
        sufficient,
    })
}

/// Greatest prime factor of `q_2n` of `[b; b, ...]` for each `n`, when the
/// factorization completes.
pub fn gpf_trace(b: &BigInt, ns: &[usize], budget: &FactorBudget) -> Vec<(usize, Option<BigInt>)> {
    ns.par_iter()
        .map(|&n| {
            (
                n,
                factorize(&metallic_q(b, 2 * n), budget)
                    .greatest_prime()
                    .cloned(),
            )
        })
        .collect()
}

/// Reports for every pair and every `n`, pairs in parallel.
pub fn scan_pairs(
    pairs: &[MetallicPair],
    ns: &[usize],
    eta: &BigRational,
    budget: &FactorBudget,
) -> Result<Vec<FactorizationReport>> {
    let jobs: Vec<(&MetallicPair, usize)> = pairs
        .iter()
        .flat_map(|p| ns.iter().map(move |&n| (p, n)))
        .collect();
    jobs.par_iter()
        .map(|(p, n)| lcm_condition(p, *n, eta, budget))
        .collect()
}

pub const CSV_HEADER: &str = "a,b,n,cond1,cond2,eta_min,gpf_a,gpf_b";

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map_or(String::new(), BigInt::to_string)
}

/// One summary line in the column order of [`CSV_HEADER`].
pub fn csv_row(r: &FactorizationReport) -> String {
    format!(
        "{},{},{},{},{},{:.6},{},{}",
        r.a,
        r.b,
        r.n,
        r.cond1,
        r.cond2,
        r.eta_min.to_f64(),
        opt(&r.gpf_a),
        opt(&r.gpf_b)
    )
}

pub fn write_csv<W: Write>(mut w: W, reports: &[FactorizationReport]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", csv_row(r))?;
    }
    Ok(())
}

pub fn write_jsonl<W: Write>(mut w: W, reports: &[FactorizationReport]) -> std::io::Result<()> {
    for r in reports {
        let line = serde_json::to_string(r).map_err(std::io::Error::other)?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}
