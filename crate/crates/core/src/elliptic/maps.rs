//! Maps from solutions of the quartic and octal equations to rational points
//! on curves `Y^2 = X^3 + A X`.
//!
//! For `x^4 - y^4 = n z^4` (coordinates `(x, y, z)`):
//!
//! | kind      | A       | point                          |
//! |-----------|---------|--------------------------------|
//! | easy-i    | `n`     | `(y^2/z^2, x^2 y/z^3)`         |
//! | easy-ii   | `-n`    | `(x^2/z^2, x y^2/z^3)`         |
//! | easy-iii  | `-n^2`  | `(n x^2/y^2, n^2 x z^2/y^3)`   |
//!
//! For `a^2 u^8 + b^2 v^8 = c w^4` (coordinates `(u, v, w)`):
//!
//! | kind      | A           | point                                  |
//! |-----------|-------------|----------------------------------------|
//! | hard-i    | `a^2b^2c^2` | `(b^2 c v^4/u^4, b^2 c^2 v^2 w^2/u^6)` |
//! | hard-ii   | `-a^2b^4c`  | `(b^2 c w^2/u^4, b^4 c v^4 w/u^6)`     |
//! | hard-iii  | `-a^4b^2c`  | `(-a^2 b^2 v^4/w^2, a^4 b^2 u^4 v^2/w^3)` |

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::curve::{rational_fourth_root, rational_sqrt, Curve, RatPoint};
use super::fp::FpPoint;
use crate::arith::{inv_mod, mul_mod, pow_mod, reduce};
use crate::descent::OctalEquation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    EasyI,
    EasyII,
    EasyIII,
    HardI,
    HardII,
    HardIII,
}

impl MapKind {
    pub fn is_easy(self) -> bool {
        matches!(self, MapKind::EasyI | MapKind::EasyII | MapKind::EasyIII)
    }
}

/// A map together with the parameters of its source equation. Easy maps use
/// `n`; hard maps use `(a, b, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveMap {
    pub kind: MapKind,
    #[serde(default)]
    pub n: u64,
    #[serde(default)]
    pub a: u64,
    #[serde(default)]
    pub b: u64,
    #[serde(default)]
    pub c: u64,
}

/// Image of a residue tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapImage {
    Point(FpPoint),
    /// All three projective coordinates vanish.
    Degenerate,
}

impl CurveMap {
    pub fn easy(kind: MapKind, n: u64) -> Self {
        assert!(kind.is_easy());
        CurveMap {
            kind,
            n,
            a: 0,
            b: 0,
            c: 0,
        }
    }

    pub fn hard(kind: MapKind, a: u64, b: u64, c: u64) -> Self {
        assert!(!kind.is_easy());
        CurveMap {
            kind,
            n: 0,
            a,
            b,
            c,
        }
    }

    /// Coefficient `A` of the target curve `Y^2 = X^3 + A X`.
    pub fn curve_a(&self) -> i128 {
        let (n, a, b, c) = (self.n as i128, self.a as i128, self.b as i128, self.c as i128);
        match self.kind {
            MapKind::EasyI => n,
            MapKind::EasyII => -n,
            MapKind::EasyIII => -n * n,
            MapKind::HardI => a * a * b * b * c * c,
            MapKind::HardII => -a * a * b.pow(4) * c,
            MapKind::HardIII => -a.pow(4) * b * b * c,
        }
    }

    pub fn curve(&self) -> Curve {
        Curve::short(self.curve_a())
    }

    /// Homogenized image `(X, Y, Z)` as integers (no reduction).
    fn homogeneous(&self, t: [i128; 3]) -> [BigInt; 3] {
        let big = |v: i128| BigInt::from(v);
        let (n, a, b, c) = (big(self.n as i128), big(self.a as i128), big(self.b as i128), big(self.c as i128));
        let [p, q, r] = t.map(big);
        match self.kind {
            // (x, y, z)
            MapKind::EasyI => [&q * &q * &r, &p * &p * &q, r.pow(3)],
            MapKind::EasyII => [&p * &p * &r, &p * &q * &q, r.pow(3)],
            MapKind::EasyIII => [&n * &p * &p * &q, &n * &n * &p * &r * &r, q.pow(3)],
            // (u, v, w)
            MapKind::HardI => [
                &b * &b * &c * q.pow(4) * &p * &p,
                &b * &b * &c * &c * &q * &q * &r * &r,
                p.pow(6),
            ],
            MapKind::HardII => [
                &b * &b * &c * &r * &r * &p * &p,
                b.pow(4) * &c * q.pow(4) * &r,
                p.pow(6),
            ],
            MapKind::HardIII => [
                -(&a * &a * &b * &b * q.pow(4) * &r),
                a.pow(4) * &b * &b * p.pow(4) * &q * &q,
                r.pow(3),
            ],
        }
    }

    /// Rational image of an integer solution of the source equation.
    pub fn image_rational(&self, t: [i128; 3]) -> RatPoint {
        let [x, y, z] = self.homogeneous(t);
        if z.is_zero() {
            return RatPoint::Infinity;
        }
        RatPoint::Affine(
            BigRational::new(x, z.clone()),
            BigRational::new(y, z),
        )
    }

    /// Image of a residue tuple modulo an odd prime.
    pub fn image_mod_p(&self, t: [u64; 3], p: u64) -> MapImage {
        let hom = self.homogeneous(t.map(|v| v as i128));
        let [x, y, z] = hom.map(|v| {
            let r = v % BigInt::from(p);
            let r: i128 = r.try_into().expect("residue fits");
            reduce(r, p)
        });
        if z == 0 {
            if x == 0 && y == 0 {
                return MapImage::Degenerate;
            }
            return MapImage::Point(FpPoint::Infinity);
        }
        let zi = inv_mod(z, p).expect("p prime");
        MapImage::Point(FpPoint::Affine(mul_mod(x, zi, p), mul_mod(y, zi, p)))
    }

    /// Could this rational point be the image of a tuple with every
    /// coordinate nonzero? Necessary conditions only; `false` is a proof.
    pub fn preimage_possible(&self, pt: &RatPoint) -> bool {
        let (x, y) = match pt {
            RatPoint::Infinity => return false,
            RatPoint::Affine(x, y) => (x, y),
        };
        let k = |v: u64| BigRational::from_integer(BigInt::from(v));
        let nonzero_square = |q: &BigRational| !q.is_zero() && rational_sqrt(q).is_some();
        let nonzero_fourth = |q: &BigRational| !q.is_zero() && rational_fourth_root(q).is_some();
        // Tries both signs of a square root `r` and applies `test(r)`.
        let signed_roots = |q: &BigRational| -> Vec<BigRational> {
            match rational_sqrt(q) {
                Some(r) if !r.is_zero() => vec![r.clone(), -r],
                _ => Vec::new(),
            }
        };
        let (n, a, b, c) = (k(self.n), k(self.a), k(self.b), k(self.c));
        match self.kind {
            MapKind::EasyI | MapKind::EasyII => signed_roots(x)
                .iter()
                .any(|r| nonzero_square(&(y / r))),
            MapKind::EasyIII => signed_roots(&(x / &n))
                .iter()
                .any(|q| nonzero_square(&(y / (&n * &n * q)))),
            MapKind::HardI => {
                let base = &b * &b * &c;
                let q4 = x / &base;
                match rational_fourth_root(&q4) {
                    Some(q) if !q.is_zero() => nonzero_square(&(y / (&base * &c * &q * &q))),
                    _ => false,
                }
            }
            MapKind::HardII => signed_roots(&(x / (&b * &b * &c)))
                .iter()
                .any(|r| nonzero_fourth(&(y / (b.pow(4) * &c * r)))),
            MapKind::HardIII => signed_roots(&(-x / (&a * &a * &b * &b)))
                .iter()
                .any(|q| nonzero_square(&(y / (a.pow(4) * &b * &b * q)))),
        }
    }
}

/// The three curves attached to `n`.
pub fn easy_maps(n: u64) -> Vec<CurveMap> {
    [MapKind::EasyI, MapKind::EasyII, MapKind::EasyIII]
        .into_iter()
        .map(|k| CurveMap::easy(k, n))
        .collect()
}

/// The three curves attached to an octal equation.
pub fn hard_maps(eq: &OctalEquation) -> Vec<CurveMap> {
    [MapKind::HardI, MapKind::HardII, MapKind::HardIII]
        .into_iter()
        .map(|k| CurveMap::hard(k, eq.a, eq.b, eq.c))
        .collect()
}

/// Solutions `(u, v, w)` modulo `p` of `a^2 u^8 + b^2 v^8 = c w^4`, not all zero.
pub fn octal_solutions_mod_p(eq: &OctalEquation, p: u64) -> Vec<[u64; 3]> {
    let a2 = reduce((eq.a as i128).pow(2), p);
    let b2 = reduce((eq.b as i128).pow(2), p);
    let c = reduce(eq.c as i128, p);
    let mut by_value: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
    for w in 0..p {
        by_value[mul_mod(c, pow_mod(w, 4, p), p) as usize].push(w);
    }
    let mut out = Vec::new();
    for u in 0..p {
        let lu = mul_mod(a2, pow_mod(u, 8, p), p);
        for v in 0..p {
            let lhs = (lu + mul_mod(b2, pow_mod(v, 8, p), p)) % p;
            for &w in &by_value[lhs as usize] {
                if u != 0 || v != 0 || w != 0 {
                    out.push([u, v, w]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::fp::FpCurve;

    #[test]
    fn curve_coefficients() {
        let a: Vec<i128> = easy_maps(31).iter().map(|m| m.curve_a()).collect();
        assert_eq!(a, vec![31, -31, -961]);
        let eq = OctalEquation::from_triple(31, 1, 2);
        assert_eq!(hard_maps(&eq)[0].curve_a(), 3844);
        let eq = OctalEquation::from_triple(6, 295, 1);
        assert_eq!(hard_maps(&eq)[1].curve_a(), -36 * 295i128.pow(4));
    }

    #[test]
    fn images_for_31_mod_5() {
        let m = CurveMap::hard(MapKind::HardI, 31, 1, 2);
        let eq = OctalEquation::from_triple(31, 1, 2);
        let e = FpCurve::new(&m.curve(), 5).unwrap();
        let mut images: Vec<FpPoint> = octal_solutions_mod_p(&eq, 5)
            .into_iter()
            .filter_map(|t| match m.image_mod_p(t, 5) {
                MapImage::Point(q) => Some(q),
                MapImage::Degenerate => None,
            })
            .collect();
        images.sort();
        images.dedup();
        assert_eq!(images, vec![FpPoint::Affine(2, 1), FpPoint::Affine(2, 4)]);
        assert!(images.iter().all(|q| e.contains(q)));
        assert_eq!(m.image_mod_p([1, 1, 1], 5), MapImage::Point(FpPoint::Affine(2, 4)));
    }

    #[test]
    fn easy_maps_send_witness_onto_curves() {
        // 3^4 - 1^4 = 5 * 2^4.
        for m in easy_maps(5) {
            let pt = m.image_rational([3, 1, 2]);
            assert!(m.curve().contains(&pt), "{:?}", m.kind);
            assert!(m.preimage_possible(&pt), "{:?}", m.kind);
        }
    }

    #[test]
    fn torsion_points_have_no_preimage() {
        for m in easy_maps(1) {
            for x in [-1i128, 0, 1] {
                assert!(!m.preimage_possible(&RatPoint::from_ints(x, 0)));
            }
            assert!(!m.preimage_possible(&RatPoint::Infinity));
        }
    }
}
