use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Denominators `q_0 .. q_n` of `[b; b, b, ...]`: `q_0 = 1`, `q_1 = b`,
/// `q_{k+1} = b q_k + q_{k-1}`.
pub fn metallic_q_seq(b: &BigInt, n: usize) -> Vec<BigInt> {
    assert!(*b >= BigInt::one(), "metallic index must be >= 1");
    let mut out = Vec::with_capacity(n + 1);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for _ in 0..=n {
        out.push(cur.clone());
        let next = b * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

/// `q_n` of `[b; b, b, ...]` by the recurrence.
pub fn metallic_q(b: &BigInt, n: usize) -> BigInt {
    metallic_q_seq(b, n).pop().unwrap()
}

/// `q_n` of `[b; b, b, ...]` as `sum_k C(n-k, k) b^(n-2k)`.
pub fn metallic_q_closed(b: &BigInt, n: usize) -> BigInt {
    assert!(*b >= BigInt::one(), "metallic index must be >= 1");
    let mut total = BigInt::zero();
    for k in 0..=n / 2 {
        total += binomial(n - k, k) * num_traits::pow(b.clone(), n - 2 * k);
    }
    total
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}
