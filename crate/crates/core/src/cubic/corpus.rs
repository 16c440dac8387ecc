use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::num::dyadic;

/// Fractional bits of the generated roots.
pub const ROOT_BITS: u64 = 20;

fn snap(x: f64) -> BigRational {
    let k = (x * (1u64 << ROOT_BITS) as f64).round() as i64;
    dyadic(BigInt::from(k), ROOT_BITS)
}

/// Reproducible monic cubics with three distinct dyadic roots in
/// `[-1000, 1000]`. About a third have widely spread roots, a third have
/// all three roots clustered at a random scale between `1e-3` and `1e3`,
/// and the rest pair two close roots with a distant one.
pub fn random_cubics(seed: u64, count: usize) -> Vec<[BigRational; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = 1000.0 - 1e-3;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let kind = rng.gen_range(0..3);
        let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
        let r: [f64; 3] = match kind {
            0 => [(); 3].map(|_| rng.gen_range(-limit..limit)),
            1 => {
                let c = rng.gen_range(-limit..limit);
                [(); 3].map(|_| c + scale * rng.gen_range(-1.0..1.0))
            }
            _ => {
                let c = rng.gen_range(-limit..limit);
                [
                    c,
                    c + scale * rng.gen_range(-1.0..1.0),
                    rng.gen_range(-limit..limit),
                ]
            }
        };
        if r.iter().any(|x| x.abs() > 1000.0) {
            continue;
        }
        let roots = r.map(snap);
        if roots[0] == roots[1] || roots[1] == roots[2] || roots[0] == roots[2] {
            continue;
        }
        out.push(roots);
    }
    out
}

/// Endpoints of `{t : |(t - r0)(t - r1)(t - r2)| <= c}` in plain floating
/// point, for cross-checking the certified solver. Works in coordinates
/// centred on the middle root and bisects each monotone piece.
pub fn float_sublevel(roots: [f64; 3], c: f64) -> Vec<(f64, f64)> {
    let mut r = roots;
    r.sort_by(f64::total_cmp);
    let (d0, d2) = (r[0] - r[1], r[2] - r[1]);
    let p = |u: f64| u * (u - d0) * (u - d2);
    let s = d0 + d2;
    let disc = (d0 * d0 - d0 * d2 + d2 * d2).sqrt();
    let big = (s + s.signum() * disc) / 3.0;
    let (mut t1, mut t2) = if big == 0.0 {
        (-disc / 3.0, disc / 3.0)
    } else {
        (big, d0 * d2 / (3.0 * big))
    };
    if t1 > t2 {
        std::mem::swap(&mut t1, &mut t2);
    }
    let reach = 2.0 * c.cbrt() + 1.0;
    let pieces = [(d0 - reach, t1), (t1, t2), (t2, d2 + reach)];
    let mut ends = Vec::new();
    for level in [c, -c] {
        for &(a, b) in &pieces {
            let (fa, fb) = (p(a) - level, p(b) - level);
            if fa == 0.0 {
                ends.push(a);
                continue;
            }
            if (fa < 0.0) == (fb < 0.0) {
                continue;
            }
            let (mut lo, mut hi) = (a, b);
            loop {
                let m = 0.5 * (lo + hi);
                if m <= lo || m >= hi {
                    break;
                }
                if (p(m) - level < 0.0) == (fa < 0.0) {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            ends.push(0.5 * (lo + hi));
        }
    }
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    ends.chunks(2)
        .filter(|w| w.len() == 2)
        .map(|w| (w[0] + r[1], w[1] + r[1]))
        .collect()
}
