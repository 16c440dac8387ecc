//! Visits of an integer rotation `x -> (a x + c) mod m` to a window.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Smallest `x >= 0` with `l <= (a x) mod m <= r`, for `0 <= l <= r < m`
/// and `0 <= a < m`.
pub fn min_hit(a: &BigInt, m: &BigInt, l: &BigInt, r: &BigInt) -> Option<BigInt> {
    debug_assert!(l <= r && r < m);
    if l.is_zero() {
        return Some(BigInt::zero());
    }
    if a.is_zero() {
        return None;
    }
    let k = l.div_ceil(a);
    if &(a * &k) <= r {
        return Some(k);
    }
    // no multiple of a in [l, r]: solve for the wrap count y instead,
    // a x - m y in [l, r]  <=>  (m y) mod a in [a - r % a, a - l % a]
    let y = min_hit(&(m % a), a, &(a - r % a), &(a - l % a))?;
    Some((l + m * y).div_ceil(a))
}

/// Smallest `x >= 0` with `(a x + c) mod m` in `[l, r]` (`r < m`).
pub fn min_hit_offset(
    a: &BigInt,
    c: &BigInt,
    m: &BigInt,
    l: &BigInt,
    r: &BigInt,
) -> Option<BigInt> {
    let lo = (l - c).mod_floor(m);
    let hi = (r - c).mod_floor(m);
    if lo <= hi {
        min_hit(a, m, &lo, &hi)
    } else {
        let first = min_hit(a, m, &BigInt::zero(), &hi);
        let second = min_hit(a, m, &lo, &(m - BigInt::one()));
        match (first, second) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Successive `x >= 1` with `(a x + c) mod 2^128` in `[0, w]`, in
/// increasing order, using the three-gap structure of return times.
pub struct WindowWalk {
    a: u128,
    w: u128,
    x: u128,
    pos: u128,
    plus: Option<(u128, u128)>,
    minus: Option<(u128, u128)>,
    started: bool,
    first: Option<u128>,
}

fn modulus() -> BigInt {
    BigInt::one() << 128
}

fn to_u128(v: &BigInt) -> Option<u128> {
    u128::try_from(v).ok()
}

impl WindowWalk {
    /// Requires `w < 2^126` so window arithmetic cannot overflow.
    pub fn new(a: u128, c: u128, w: u128) -> Self {
        assert!(w < 1 << 126, "window too wide");
        let m = modulus();
        let ab = BigInt::from(a);
        let cb = BigInt::from(c);
        let wb = BigInt::from(w);
        // x = 1 + x', (a x' + (a + c)) mod m in [0, w]
        let first = min_hit_offset(&ab, &((&ab + &cb) % &m), &m, &BigInt::zero(), &wb)
            .and_then(|x| to_u128(&(x + 1)));
        // smallest g >= 1 moving forward by at most w (zero included)
        let plus = min_hit_offset(&ab, &ab, &m, &BigInt::zero(), &wb)
            .and_then(|g| to_u128(&(g + 1)))
            .map(|g| (g, a.wrapping_mul(g)));
        let minus = min_hit(&ab, &m, &(&m - &wb), &(&m - 1))
            .and_then(|g| to_u128(&g))
            .map(|g| (g, a.wrapping_mul(g).wrapping_neg()));
        WindowWalk {
            a,
            w,
            x: 0,
            pos: c,
            plus,
            minus,
            started: false,
            first,
        }
    }

    fn step(&mut self) -> Option<()> {
        if let Some((g, d)) = self.plus.filter(|&(_, d)| self.pos + d <= self.w) {
            self.x = self.x.checked_add(g)?;
            self.pos += d;
            return Some(());
        }
        if let Some((g, d)) = self.minus.filter(|&(_, d)| self.pos >= d) {
            self.x = self.x.checked_add(g)?;
            self.pos -= d;
            return Some(());
        }
        let ((gp, dp), (gm, dm)) = (self.plus?, self.minus?);
        self.x = self.x.checked_add(gp)?.checked_add(gm)?;
        self.pos = self.pos + dp - dm;
        Some(())
    }
}

impl Iterator for WindowWalk {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if !self.started {
            self.started = true;
            let x = self.first?;
            self.x = x;
            self.pos = self.a.wrapping_mul(x).wrapping_add(self.pos);
            debug_assert!(self.pos <= self.w);
            return Some(x);
        }
        self.step()?;
        debug_assert!(self.pos <= self.w);
        Some(self.x)
    }
}
