use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::cf::ConvergentTable;
use crate::dirichlet::DirichletPoint;
use crate::error::{Error, Result};
use crate::exact::num::rat_int;

/// The line through a Dirichlet point directed by `(1, p_a/q_a, p_b/q_b)`,
/// parametrised as `v(t) = M - t (1, p_a/q_a, p_b/q_b)`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxLine {
    pub n: usize,
    pub base: DirichletPoint,
    #[serde_as(as = "DisplayFromStr")]
    pub p_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q_a: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub p_b: BigInt,
    #[serde_as(as = "DisplayFromStr")]
    pub q_b: BigInt,
}

impl ApproxLine {
    pub fn dir_alpha(&self) -> BigRational {
        BigRational::new(self.p_a.clone(), self.q_a.clone())
    }

    pub fn dir_beta(&self) -> BigRational {
        BigRational::new(self.p_b.clone(), self.q_b.clone())
    }

    /// `lcm(q_a, q_b)`: the step between lattice points on the line.
    pub fn lcm(&self) -> BigInt {
        self.q_a.lcm(&self.q_b)
    }

    pub fn point_at(&self, t: &BigRational) -> [BigRational; 3] {
        let m = &self.base;
        [
            rat_int(m.x.clone()) - t,
            rat_int(m.y.clone()) - t * self.dir_alpha(),
            rat_int(m.z.clone()) - t * self.dir_beta(),
        ]
    }

    /// `v(t)` when it is a lattice point.
    pub fn lattice_point(&self, t: &BigInt) -> Option<[BigInt; 3]> {
        let (ya, ra) = (t * &self.p_a).div_rem(&self.q_a);
        let (zb, rb) = (t * &self.p_b).div_rem(&self.q_b);
        if !ra.is_zero() || !rb.is_zero() {
            return None;
        }
        let m = &self.base;
        Some([&m.x - t, &m.y - ya, &m.z - zb])
    }
}

/// Line through `pt` using the convergents of index `2n` of both tables.
pub fn build_line(
    pt: &DirichletPoint,
    tbl_alpha: &ConvergentTable,
    tbl_beta: &ConvergentTable,
    n: usize,
) -> Result<ApproxLine> {
    let k = 2 * n;
    if tbl_alpha.len() <= k || tbl_beta.len() <= k {
        return Err(Error::InvalidArgument(format!(
            "convergent tables too short for index {k}"
        )));
    }
    Ok(ApproxLine {
        n,
        base: pt.clone(),
        p_a: tbl_alpha.p(k).clone(),
        q_a: tbl_alpha.q(k).clone(),
        p_b: tbl_beta.p(k).clone(),
        q_b: tbl_beta.q(k).clone(),
    })
}
