use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};

/// Limits for [`factorize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBudget {
    /// Trial division bound.
    pub trial_limit: u64,
    /// Pollard-Brent iterations per composite cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 1 << 21,
        }
    }
}

/// Prime factorization, possibly partial.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// `(prime, exponent)` in increasing order of the prime.
    #[serde_as(as = "Vec<(DisplayFromStr, _)>")]
    pub factors: Vec<(BigInt, u32)>,
    /// Composite cofactors left unsplit within the budget.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub unfactored: Vec<BigInt>,
    /// Every listed prime carries a primality proof (deterministic
    /// Miller-Rabin range or a Pocklington certificate).
    pub certified: bool,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    pub fn product(&self) -> BigInt {
        let mut p: BigInt = self.unfactored.iter().product();
        for (q, e) in &self.factors {
            p *= num_traits::pow(q.clone(), *e as usize);
        }
        p
    }

    pub fn greatest_prime(&self) -> Option<&BigInt> {
        if self.is_complete() {
            self.factors.last().map(|(p, _)| p)
        } else {
            None
        }
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(1_000_000))
}

fn sieve(limit: usize) -> Vec<u32> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Miller-Rabin with the first 13 primes as bases is deterministic below
/// this bound.
fn mr_deterministic_bound() -> BigInt {
    "3317044064679887385961981".parse().unwrap()
}

fn miller_rabin(n: &BigInt, bases: &[u32]) -> bool {
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in bases {
        let a = BigInt::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Probable-prime test: trial division by small primes, then strong
/// Miller-Rabin rounds. Proven correct below about `3.3e24`.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &small_primes()[..200] {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    miller_rabin(n, &MR_BASES)
}

/// Proves primality of a probable prime: directly below the
/// deterministic Miller-Rabin bound, by a Pocklington certificate above.
pub fn certify_prime(n: &BigInt, budget: &FactorBudget) -> bool {
    if !is_probable_prime(n) {
        return false;
    }
    if n < &mr_deterministic_bound() || n <= &BigInt::from(budget.trial_limit).pow(2) {
        return true;
    }
    pocklington(n, budget)
}

/// Pocklington: with `n - 1 = F R`, `F > sqrt(n)` fully factored, and for
/// every prime `q | F` a witness `a` with `a^(n-1) = 1` and
/// `gcd(a^((n-1)/q) - 1, n) = 1`, `n` is prime.
fn pocklington(n: &BigInt, budget: &FactorBudget) -> bool {
    let nm1 = n - BigInt::one();
    let part = factor_inner(&nm1, budget);
    let mut f = BigInt::one();
    let mut primes = Vec::new();
    for (q, e) in &part.factors {
        if !certify_prime(q, budget) {
            continue;
        }
        f *= num_traits::pow(q.clone(), *e as usize);
        primes.push(q.clone());
        if &f * &f > *n {
            break;
        }
    }
    if &f * &f <= *n {
        return false;
    }
    primes.iter().all(|q| {
        (2u32..200).any(|a| {
            let a = BigInt::from(a);
            if !a.modpow(&nm1, n).is_one() {
                return false;
            }
            let t = a.modpow(&(&nm1 / q), n) - BigInt::one();
            t.gcd(n).is_one()
        })
    })
}

fn brent(n: &BigInt, c: u64, iterations: u64) -> Option<BigInt> {
    let c = BigInt::from(c);
    let f = |x: &BigInt| (x * x + &c) % n;
    let m = 128u64;
    let (mut y, mut r, mut q) = (BigInt::from(2), 1u64, BigInt::one());
    let mut g = BigInt::one();
    let (mut x, mut ys) = (BigInt::zero(), BigInt::zero());
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                q = (&q * (&x - &y).abs()) % n;
            }
            g = q.gcd(n);
            k += m;
            spent += m;
        }
        r *= 2;
        if spent > iterations {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = (&x - &ys).abs().gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn split(n: &BigInt, budget: &FactorBudget, out: &mut Vec<BigInt>, left: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n) {
        out.push(n.clone());
        return;
    }
    let root = n.sqrt();
    if &(&root * &root) == n {
        split(&root, budget, out, left);
        split(&root, budget, out, left);
        return;
    }
    let per_try = budget.rho_iterations / 4;
    for c in 1..=4u64 {
        if let Some(d) = brent(n, c, per_try) {
            split(&d, budget, out, left);
            split(&(n / &d), budget, out, left);
            return;
        }
    }
    left.push(n.clone());
}

fn factor_inner(n: &BigInt, budget: &FactorBudget) -> Factorization {
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();
    let limit = budget.trial_limit.min(1_000_000);
    for &p in small_primes() {
        if p as u64 > limit {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            primes.push(pb.clone());
        }
    }
    let mut unfactored = Vec::new();
    if !rest.is_one() {
        let small = rest.to_u64().map_or(false, |r| r <= limit * limit);
        if small {
            primes.push(rest.clone());
        } else {
            split(&rest, budget, &mut primes, &mut unfactored);
        }
    }
    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    unfactored.sort();
    Factorization {
        factors,
        unfactored,
        certified: false,
    }
}

/// Factors `n >= 1` by trial division, then Pollard-Brent on what is left,
/// certifying every prime found. Composite cofactors that resist the
/// budget are kept in `unfactored`.
pub fn factorize(n: &BigInt, budget: &FactorBudget) -> Factorization {
    assert!(n.is_positive(), "factorize needs a positive integer");
    let mut f = factor_inner(n, budget);
    f.certified = f.factors.iter().all(|(p, _)| certify_prime(p, budget));
    f
}

/// [`factorize`], failing when the factorization is incomplete.
pub fn factorize_complete(n: &BigInt, budget: &FactorBudget) -> Result<Factorization> {
    let f = factorize(n, budget);
    match f.unfactored.first() {
        Some(c) => Err(Error::FactorizationTimeout(c.to_string())),
        None => Ok(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::num::int;
    use proptest::prelude::*;

    fn naive_factors(mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut p = 2;
        while p * p <= n {
            while n % p == 0 {
                match out.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => out.push((p, 1)),
                }
                n /= p;
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn small_cases() {
        let b = FactorBudget::default();
        assert_eq!(
            factorize(&int(50), &b).factors,
            vec![(int(2), 1), (int(5), 2)]
        );
        assert_eq!(factorize(&int(37), &b).factors, vec![(int(37), 1)]);
        assert_eq!(factorize(&int(1), &b).factors, vec![]);
    }

    #[test]
    fn beyond_trial_division() {
        let b = FactorBudget::default();
        let p: BigInt = "1000000007".parse().unwrap();
        let q: BigInt = "998244353".parse().unwrap();
        let f = factorize(&(&p * &q * 12), &b);
        assert!(f.is_complete() && f.certified);
        assert_eq!(f.factors, vec![(int(2), 2), (int(3), 1), (q, 1), (p, 1)]);
    }

    #[test]
    fn large_prime_needs_certificate() {
        let b = FactorBudget::default();
        // 2^89 - 1 is a Mersenne prime above the deterministic MR range
        let m89 = (BigInt::one() << 89) - 1;
        assert!(certify_prime(&m89, &b));
        let f = factorize(&(&m89 * 6), &b);
        assert!(f.certified && f.is_complete());
        // Carmichael number 561 and a strong pseudoprime to base 2
        assert!(!is_probable_prime(&int(561)));
        assert!(!is_probable_prime(&int(2047)));
    }

    #[test]
    fn budget_exhaustion_reports_cofactor() {
        let p: BigInt = "1000000000000000003".parse().unwrap();
        let q: BigInt = "1000000000000000009".parse().unwrap();
        let tiny = FactorBudget {
            trial_limit: 1000,
            rho_iterations: 256,
        };
        let f = factorize(&(&p * &q), &tiny);
        assert_eq!(f.unfactored, vec![&p * &q]);
        assert!(matches!(
            factorize_complete(&(&p * &q), &tiny),
            Err(Error::FactorizationTimeout(_))
        ));
        assert_eq!(f.greatest_prime(), None);
    }

    proptest! {
        #[test]
        fn matches_naive(n in 1u64..50_000_000) {
            let f = factorize(&BigInt::from(n), &FactorBudget::default());
            let want: Vec<(BigInt, u32)> = naive_factors(n).into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
            prop_assert_eq!(&f.factors, &want);
            prop_assert_eq!(f.product(), BigInt::from(n));
        }

        #[test]
        fn products_of_two_large(a in 1_000_000u64..1_000_000_000, b in 1_000_000u64..1_000_000_000) {
            let n = BigInt::from(a) * BigInt::from(b);
            let f = factorize(&n, &FactorBudget::default());
            prop_assert!(f.is_complete());
            prop_assert_eq!(f.product(), n);
            for (p, _) in &f.factors {
                prop_assert!(is_probable_prime(p));
            }
        }
    }
}
