//! Short Weierstrass curves over the rationals and their group law.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// `y^2 = x^3 + A x + B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    #[serde(with = "crate::wide")]
    pub a: i128,
    #[serde(with = "crate::wide")]
    pub b: i128,
}

impl Curve {
    pub fn new(a: i128, b: i128) -> Self {
        let c = Curve { a, b };
        assert!(!c.discriminant().is_zero(), "singular curve A={a} B={b}");
        c
    }

    pub fn short(a: i128) -> Self {
        Curve::new(a, 0)
    }

    /// `D = 4A^3 + 27B^2`.
    pub fn discriminant(&self) -> BigInt {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        BigInt::from(4) * &a * &a * &a + BigInt::from(27) * &b * &b
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        match p {
            RatPoint::Infinity => true,
            RatPoint::Affine(x, y) => {
                let rhs = x * x * x + rat(self.a) * x + rat(self.b);
                y * y == rhs
            }
        }
    }

    pub fn neg(&self, p: &RatPoint) -> RatPoint {
        match p {
            RatPoint::Infinity => RatPoint::Infinity,
            RatPoint::Affine(x, y) => RatPoint::Affine(x.clone(), -y),
        }
    }

    /// Chord-tangent addition.
    pub fn add(&self, p: &RatPoint, q: &RatPoint) -> RatPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (RatPoint::Infinity, _) => return q.clone(),
            (_, RatPoint::Infinity) => return p.clone(),
            (RatPoint::Affine(x1, y1), RatPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return RatPoint::Infinity;
            }
            (rat(3) * x1 * x1 + rat(self.a)) / (rat(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        RatPoint::Affine(x3, y3)
    }

    pub fn mul(&self, k: i64, p: &RatPoint) -> RatPoint {
        let mut base = if k < 0 { self.neg(p) } else { p.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = RatPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }
}

pub fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A rational point in affine coordinates, or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatPoint {
    Infinity,
    Affine(BigRational, BigRational),
}

impl RatPoint {
    pub fn from_ints(x: i128, y: i128) -> Self {
        RatPoint::Affine(rat(x), rat(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RatPoint::Infinity)
    }

    pub fn is_integral(&self) -> bool {
        match self {
            RatPoint::Infinity => true,
            RatPoint::Affine(x, y) => x.is_integer() && y.is_integer(),
        }
    }

    pub fn to_proj(&self) -> ProjPoint {
        match self {
            RatPoint::Infinity => ProjPoint::infinity(),
            RatPoint::Affine(x, y) => {
                // x = X/Z, y = Y/Z with Z the lcm of denominators.
                let z = x.denom().lcm(y.denom());
                let xs = x.numer() * (&z / x.denom());
                let ys = y.numer() * (&z / y.denom());
                ProjPoint { x: xs, y: ys, z }
            }
        }
    }
}

/// Projective integer coordinates `(X : Y : Z)` on `Y^2 Z = X^3 + A X Z^2 + B Z^3`.
///
/// Serialized as decimal strings so large coordinates survive JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    #[serde(with = "bigint_str")]
    pub x: BigInt,
    #[serde(with = "bigint_str")]
    pub y: BigInt,
    #[serde(with = "bigint_str")]
    pub z: BigInt,
}

impl ProjPoint {
    pub fn infinity() -> Self {
        ProjPoint {
            x: BigInt::zero(),
            y: BigInt::one(),
            z: BigInt::zero(),
        }
    }

    pub fn new(x: i128, y: i128, z: i128) -> Self {
        ProjPoint {
            x: BigInt::from(x),
            y: BigInt::from(y),
            z: BigInt::from(z),
        }
    }

    pub fn to_rat(&self) -> Option<RatPoint> {
        if self.z.is_zero() {
            if self.x.is_zero() && !self.y.is_zero() {
                return Some(RatPoint::Infinity);
            }
            return None;
        }
        Some(RatPoint::Affine(
            BigRational::new(self.x.clone(), self.z.clone()),
            BigRational::new(self.y.clone(), self.z.clone()),
        ))
    }

    pub fn on_curve(&self, c: &Curve) -> bool {
        if self.x.is_zero() && self.y.is_zero() && self.z.is_zero() {
            return false;
        }
        let (x, y, z) = (&self.x, &self.y, &self.z);
        let a = BigInt::from(c.a);
        let b = BigInt::from(c.b);
        y * y * z == x * x * x + a * x * z * z + b * z * z * z
    }
}

pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Is a rational number the square of a rational? Returns the nonnegative root.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Nonnegative rational fourth root, when it exists.
pub fn rational_fourth_root(q: &BigRational) -> Option<BigRational> {
    rational_sqrt(q).and_then(|r| rational_sqrt(&r))
}
