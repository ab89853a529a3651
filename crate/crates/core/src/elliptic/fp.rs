//! Reduction of curves and points modulo a prime of good reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::curve::{Curve, RatPoint};
use crate::arith::{inv_mod, mul_mod, reduce};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FpPoint {
    Infinity,
    Affine(u64, u64),
}

impl FpPoint {
    pub fn label(&self) -> String {
        match self {
            FpPoint::Infinity => "(0:1:0)".to_string(),
            FpPoint::Affine(x, y) => format!("({x}:{y}:1)"),
        }
    }
}

/// A curve reduced modulo an odd prime `p` not dividing the discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FpCurve {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

impl FpCurve {
    /// `None` when `p = 2` or `p | D`.
    pub fn new(curve: &Curve, p: u64) -> Option<Self> {
        if p == 2 || bigint_mod(&curve.discriminant(), p) == 0 {
            return None;
        }
        Some(FpCurve {
            p,
            a: reduce(curve.a, p),
            b: reduce(curve.b, p),
        })
    }

    pub fn contains(&self, pt: &FpPoint) -> bool {
        match *pt {
            FpPoint::Infinity => true,
            FpPoint::Affine(x, y) => {
                let p = self.p;
                let rhs = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(self.a, x, p) + self.b) % p;
                mul_mod(y, y, p) == rhs
            }
        }
    }

    pub fn neg(&self, pt: &FpPoint) -> FpPoint {
        match *pt {
            FpPoint::Infinity => FpPoint::Infinity,
            FpPoint::Affine(x, y) => FpPoint::Affine(x, (self.p - y) % self.p),
        }
    }

    pub fn add(&self, p1: &FpPoint, p2: &FpPoint) -> FpPoint {
        let p = self.p;
        let (x1, y1, x2, y2) = match (*p1, *p2) {
            (FpPoint::Infinity, q) => return q,
            (q, FpPoint::Infinity) => return q,
            (FpPoint::Affine(x1, y1), FpPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return FpPoint::Infinity;
            }
            let num = (3 * mul_mod(x1, x1, p) + self.a) % p;
            mul_mod(num, inv_mod(2 * y1 % p, p).expect("nonzero"), p)
        } else {
            let num = (y2 + p - y1) % p;
            let den = (x2 + p - x1) % p;
            mul_mod(num, inv_mod(den, p).expect("nonzero"), p)
        };
        let x3 = (mul_mod(lambda, lambda, p) + 2 * p - x1 - x2) % p;
        let y3 = (mul_mod(lambda, (x1 + p - x3) % p, p) + p - y1) % p;
        FpPoint::Affine(x3, y3)
    }

    pub fn mul(&self, k: u64, pt: &FpPoint) -> FpPoint {
        let mut acc = FpPoint::Infinity;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Every point, by direct enumeration.
    pub fn points(&self) -> Vec<FpPoint> {
        let p = self.p;
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for y in 0..p {
            roots[mul_mod(y, y, p) as usize].push(y);
        }
        let mut out = vec![FpPoint::Infinity];
        for x in 0..p {
            let rhs = (mul_mod(mul_mod(x, x, p), x, p) + mul_mod(self.a, x, p) + self.b) % p;
            for &y in &roots[rhs as usize] {
                out.push(FpPoint::Affine(x, y));
            }
        }
        out
    }

    /// Number of points.
    pub fn order(&self) -> u64 {
        self.points().len() as u64
    }

    /// Order of a point by repeated addition.
    pub fn point_order(&self, pt: &FpPoint) -> u64 {
        let mut k = 1;
        let mut q = *pt;
        while q != FpPoint::Infinity {
            q = self.add(&q, pt);
            k += 1;
        }
        k
    }

    /// Reduce a rational point; denominators divisible by `p` go to infinity.
    pub fn reduce_point(&self, pt: &RatPoint) -> FpPoint {
        match pt {
            RatPoint::Infinity => FpPoint::Infinity,
            RatPoint::Affine(x, y) => {
                let p = self.p;
                let dx = bigint_mod(x.denom(), p);
                if dx == 0 {
                    return FpPoint::Infinity;
                }
                let dy = bigint_mod(y.denom(), p);
                let xr = mul_mod(bigint_mod(x.numer(), p), inv_mod(dx, p).unwrap(), p);
                let yr = mul_mod(bigint_mod(y.numer(), p), inv_mod(dy, p).unwrap(), p);
                FpPoint::Affine(xr, yr)
            }
        }
    }
}

/// Is `v` zero modulo `p`? Convenience for callers holding big integers.
pub fn divisible(v: &BigInt, p: u64) -> bool {
    v.is_zero() || bigint_mod(v, p) == 0
}
