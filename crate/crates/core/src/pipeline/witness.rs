use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::exact::num::{bitlen, qle, rat_int};
use crate::exact::serde_num::RatStr;
use crate::exact::{form_value, Enclosure, RealSpec};
use crate::precision::Precision;

/// Where a witness on an approximating line came from: `t = k l`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub n: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub l: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub k: BigInt,
}

/// An integer vector `u` with `u_1 != 0` and `0 < |f(u)| <= epsilon`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    #[serde_as(as = "[DisplayFromStr; 3]")]
    pub u: [BigInt; 3],
    pub f_value: Enclosure,
    #[serde_as(as = "RatStr")]
    pub epsilon: BigRational,
    /// Precision at which the enclosure was certified.
    pub bits: u64,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub t: Option<BigInt>,
    pub provenance: Option<Provenance>,
}

fn f_at_bits(u: &[BigInt; 3], alpha: &RealSpec, beta: &RealSpec, bits: u64) -> Enclosure {
    let v = [
        rat_int(u[0].clone()),
        rat_int(u[1].clone()),
        rat_int(u[2].clone()),
    ];
    form_value(&v, &alpha.enclosure(bits), &beta.enclosure(bits))
}

fn certified_inside(f: &Enclosure, epsilon: &BigRational) -> bool {
    (f.is_positive() || f.is_negative()) && qle(f.abs().hi(), epsilon)
}

impl WitnessCertificate {
    /// Recomputes `f(u)` at twice the certifying precision.
    pub fn reverify(&self, alpha: &RealSpec, beta: &RealSpec) -> bool {
        !self.u[0].is_zero()
            && certified_inside(
                &f_at_bits(&self.u, alpha, beta, 2 * self.bits),
                &self.epsilon,
            )
    }
}

/// Certifies `0 < |f(u)| <= epsilon`, refining until the enclosure of
/// `f(u)` is decided against both `0` and `epsilon`.
pub fn verify_witness(
    u: &[BigInt; 3],
    alpha: &RealSpec,
    beta: &RealSpec,
    epsilon: &BigRational,
    prec: &Precision,
) -> Result<WitnessCertificate> {
    if u[0].is_zero() {
        return Err(Error::ZeroFirstCoordinate);
    }
    if !epsilon.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    let refinable = alpha.refinable() || beta.refinable();
    let scale = 2 * bitlen(&u[0].abs()) + bitlen(&(u[1].abs() + u[2].abs()));
    let found = prec
        .with_start(prec.start_bits + scale)
        .refine(refinable, "witness", |bits| {
            let f = f_at_bits(u, alpha, beta, bits);
            if certified_inside(&f, epsilon) {
                return Ok(Some(Ok((f, bits))));
            }
            let a = f.abs();
            if a.lo() > epsilon || (f.is_point() && f.lo().is_zero()) {
                return Ok(Some(Err(Error::NotAWitness)));
            }
            Ok(None)
        })
        .map_err(|_| Error::Undecidable(format!("|f(u)| against (0, {epsilon}] at u = {u:?}")))?;
    let (f_value, bits) = found?;
    Ok(WitnessCertificate {
        u: u.clone(),
        f_value,
        epsilon: epsilon.clone(),
        bits,
        t: None,
        provenance: None,
    })
}

/// Appends a certificate to a JSON-lines log.
pub fn append_witness_log(path: &Path, cert: &WitnessCertificate) -> std::io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(cert).map_err(std::io::Error::other)?;
    writeln!(f, "{line}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::{int, rat};

    fn u345() -> [BigInt; 3] {
        [int(3), int(4), int(5)]
    }

    #[test]
    fn sqrt2_sqrt3_witness() {
        let p = Precision::default();
        let c = verify_witness(
            &u345(),
            &RealSpec::sqrt(2),
            &RealSpec::sqrt(3),
            &rat(1, 5),
            &p,
        )
        .unwrap();
        assert!((c.f_value.to_f64() - 0.142783675876949).abs() < 1e-12);
        assert!(c.reverify(&RealSpec::sqrt(2), &RealSpec::sqrt(3)));
        let json = serde_json::to_string(&c).unwrap();
        let back: WitnessCertificate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejections() {
        let p = Precision::default();
        let (a, b) = (RealSpec::sqrt(2), RealSpec::sqrt(3));
        assert_eq!(
            verify_witness(&u345(), &a, &b, &rat(1, 10), &p),
            Err(Error::NotAWitness)
        );
        let z = [int(0), int(4), int(5)];
        assert_eq!(
            verify_witness(&z, &a, &b, &rat(1, 5), &p),
            Err(Error::ZeroFirstCoordinate)
        );
        // exact zero is not a witness
        let half = RealSpec::exact(rat(1, 2));
        let u = [int(2), int(1), int(3)];
        assert_eq!(
            verify_witness(&u, &half, &b, &rat(1, 5), &p),
            Err(Error::NotAWitness)
        );
    }

    #[test]
    fn log_appends_lines() {
        let p = Precision::default();
        let c = verify_witness(
            &u345(),
            &RealSpec::sqrt(2),
            &RealSpec::sqrt(3),
            &rat(1, 5),
            &p,
        )
        .unwrap();
        let dir = std::env::temp_dir().join(format!("lf-witness-{}", std::process::id()));
        let _ = std::fs::remove_file(&dir);
        append_witness_log(&dir, &c).unwrap();
        append_witness_log(&dir, &c).unwrap();
        let text = std::fs::read_to_string(&dir).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(text.lines().count(), 2);
        for line in text.lines() {
            let back: WitnessCertificate = serde_json::from_str(line).unwrap();
            assert_eq!(back, c);
        }
    }
}
