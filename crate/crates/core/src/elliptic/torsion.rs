//! Rational torsion of `y^2 = x^3 + A x` via Lutz-Nagell.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::curve::{Curve, RatPoint};
use super::fp::FpCurve;
use crate::arith::{factorize, primes_up_to};

/// Gcd of `#E(F_p)` over the first two good primes: a multiple of the
/// torsion order.
pub fn torsion_order_bound(curve: &Curve) -> u64 {
    let mut g = 0u64;
    let mut used = 0;
    for p in primes_up_to(10_000) {
        if let Some(e) = FpCurve::new(curve, p) {
            g = num_integer::gcd(g, e.order());
            used += 1;
            if used == 2 {
                break;
            }
        }
    }
    g
}

/// Integer roots of the monotone cubic piece `f(x) = x^3 + A x - c` on `[lo, hi]`.
fn integer_root_on(a: &BigInt, c: &BigInt, mut lo: BigInt, mut hi: BigInt, increasing: bool) -> Option<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x - c;
    while lo <= hi {
        let mid: BigInt = (&lo + &hi) >> 1;
        let v = f(&mid);
        if v.is_zero() {
            return Some(mid);
        }
        if (v.is_positive()) == increasing {
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    None
}

/// All integer `x` with `x^3 + A x = c`.
fn integer_roots(a: i128, c: &BigInt) -> Vec<BigInt> {
    let a_big = BigInt::from(a);
    let bound = BigInt::from(a.unsigned_abs()) + c.abs() + BigInt::one();
    let mut pieces = Vec::new();
    if a >= 0 {
        pieces.push((-bound.clone(), bound.clone(), true));
    } else {
        // Critical points at +-sqrt(-A/3); split at integers around them.
        let r0: u128 = ((-a) as u128 / 3).isqrt();
        let r = BigInt::from(r0);
        let left: BigInt = -&r - 1;
        let right: BigInt = &r + 1;
        pieces.push((-bound.clone(), left.clone(), true));
        pieces.push((left.clone() + 1, right.clone() - 1, false));
        pieces.push((right, bound.clone(), true));
    }
    let mut out = Vec::new();
    for (lo, hi, inc) in pieces {
        if let Some(x) = integer_root_on(&a_big, c, lo.clone(), hi.clone(), inc) {
            out.push(x);
        }
        // The middle piece may not be monotone at its integer ends; check them directly.
        for end in [lo, hi] {
            if (&end * &end * &end + &a_big * &end - c).is_zero() {
                out.push(end);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Lutz-Nagell candidates: integral points with `y = 0` or `y^2 | 4A^3`.
pub fn lutz_nagell_candidates(curve: &Curve) -> Vec<RatPoint> {
    assert!(curve.b == 0 && curve.a != 0);
    let a = curve.a;
    // Exponents of y range over half the exponents of 4|A|^3.
    let mut fac: Vec<(u64, u32)> = factorize(a.unsigned_abs() as u64)
        .into_iter()
        .map(|(p, e)| (p, 3 * e))
        .collect();
    match fac.iter_mut().find(|(p, _)| *p == 2) {
        Some(entry) => entry.1 += 2,
        None => fac.insert(0, (2, 2)),
    }
    let mut ys = vec![BigInt::one()];
    for (p, e) in fac {
        let mut next = Vec::new();
        for y in &ys {
            let mut q = y.clone();
            for _ in 0..=e / 2 {
                next.push(q.clone());
                q *= p;
            }
        }
        ys = next;
    }
    let mut out = Vec::new();
    for x in integer_roots(a, &BigInt::zero()) {
        out.push(RatPoint::Affine(x.into(), BigInt::zero().into()));
    }
    for y in ys {
        let c = &y * &y;
        for x in integer_roots(a, &c) {
            out.push(RatPoint::Affine(x.clone().into(), y.clone().into()));
            out.push(RatPoint::Affine(x.into(), (-&y).into()));
        }
    }
    out
}

/// The full rational torsion subgroup (including the point at infinity).
pub fn torsion_subgroup(curve: &Curve) -> Vec<RatPoint> {
    let bound = torsion_order_bound(curve) as i64;
    let mut out = vec![RatPoint::Infinity];
    for p in lutz_nagell_candidates(curve) {
        if curve.mul(bound, &p).is_infinity() {
            out.push(p);
        }
    }
    out
}
