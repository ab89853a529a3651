//! Rank bounds for `E: y^2 = x^3 + A x` by descent via 2-isogeny.
//!
//! `E` is 2-isogenous to `E': y^2 = x^3 - 4A x`. For each squarefree `d | A`
//! (either sign) the torsor `N^2 = d M^4 + (A/d) e^4` has a rational point
//! exactly when `d` lies in the image of `E(Q)` under the connecting map
//! `alpha`. Counting torsors that are soluble at every place bounds that
//! image, and
//!
//! `rank E(Q) = log2 |alpha(E)| + log2 |alpha'(E')| - 2`.
//!
//! Only primes dividing `2A` can obstruct; torsors whose local test runs out
//! of depth are counted as soluble, so the bound stays an upper bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::curve::{rat, Curve, RatPoint};
use super::torsion::torsion_subgroup;
use crate::arith::{factorize, is_kth_power, pow_mod};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Place {
    Real,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TorsorStatus {
    /// A rational point `(M, e, N)` was found.
    Point {
        #[serde(with = "crate::wide")]
        m: i128,
        #[serde(with = "crate::wide")]
        e: i128,
        #[serde(with = "crate::wide")]
        n: i128,
    },
    /// Soluble at every place (no global point looked for or found).
    LocallySoluble,
    /// Some local test gave up; counted as soluble.
    Undetermined { place: Place },
    Insoluble { place: Place },
}

impl TorsorStatus {
    pub fn possibly_soluble(&self) -> bool {
        !matches!(self, TorsorStatus::Insoluble { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsorRecord {
    #[serde(with = "crate::wide")]
    pub d: i128,
    #[serde(flatten)]
    pub status: TorsorStatus,
}

/// Torsor data for one curve of the isogenous pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerSide {
    #[serde(with = "crate::wide")]
    pub a: i128,
    pub torsors: Vec<TorsorRecord>,
}

impl SelmerSide {
    pub fn possibly_soluble(&self) -> usize {
        self.torsors.iter().filter(|t| t.status.possibly_soluble()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyDescent {
    pub curve: SelmerSide,
    pub dual: SelmerSide,
    /// Upper bound for the rank.
    pub bound: u32,
}

pub fn floor_log2(n: usize) -> u32 {
    usize::BITS - 1 - n.leading_zeros()
}

/// `floor(log2 s1) + floor(log2 s2) - 2`; each count bounds a power of two.
pub fn bound_from_counts(s1: usize, s2: usize) -> u32 {
    (floor_log2(s1) + floor_log2(s2)).saturating_sub(2)
}

/// Squarefree divisors of `|a|` with both signs, ordered by absolute value then sign.
pub fn squarefree_divisors(a: i128) -> Option<Vec<i128>> {
    let abs = u64::try_from(a.unsigned_abs()).ok()?;
    let primes: Vec<i128> = factorize(abs).into_iter().map(|(p, _)| p as i128).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let d: i128 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .product();
        out.push(d);
        out.push(-d);
    }
    out.sort_by_key(|d| (d.abs(), *d < 0));
    Some(out)
}

fn big_val(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ClassVerdict {
    Soluble,
    Dead,
    Unknown,
}

fn binom4_val(j: u32, p: u64) -> u32 {
    let c = [1u64, 4, 6, 4, 1][j as usize];
    let mut v = 0;
    let mut c = c;
    while c % p == 0 {
        c /= p;
        v += 1;
    }
    v
}

/// Does some `x` in the class `x0 + p^k Z_p` make `c4 x^4 + c0` a square in `Q_p`?
fn class_square(c4: &BigInt, c0: &BigInt, x0: &BigInt, k: u32, p: u64, cap: u32) -> ClassVerdict {
    let val = c4 * x0.pow(4) + c0;
    if val.is_zero() {
        return ClassVerdict::Soluble;
    }
    if !val.is_negative() {
        let r = val.sqrt();
        if &r * &r == val {
            return ClassVerdict::Soluble;
        }
    }
    let v = big_val(&val, p);
    // Valuation of g(x0 + p^k t) - g(x0) is at least `prec`.
    let vc4 = big_val(c4, p);
    let vx0 = if x0.is_zero() { u32::MAX / 8 } else { big_val(x0, p) };
    let prec = vc4
        + (1..=4u32)
            .map(|j| binom4_val(j, p) + (4 - j) * vx0 + k * j)
            .min()
            .unwrap();
    if v < prec {
        if v % 2 == 1 {
            return ClassVerdict::Dead;
        }
        let known = prec - v;
        let pv = BigInt::from(p).pow(v);
        let unit = &val / pv;
        if p == 2 {
            if known >= 3 {
                let r = unit.mod_floor(&BigInt::from(8)).to_u64().unwrap();
                return if r == 1 { ClassVerdict::Soluble } else { ClassVerdict::Dead };
            }
        } else {
            let r = unit.mod_floor(&BigInt::from(p)).to_u64().unwrap();
            return if pow_mod(r, (p - 1) / 2, p) == 1 {
                ClassVerdict::Soluble
            } else {
                ClassVerdict::Dead
            };
        }
    } else {
        // A simple root of g in the class gives a point with N = 0.
        let deriv = BigInt::from(4) * c4 * x0.pow(3);
        if !deriv.is_zero() && v > 2 * big_val(&deriv, p) {
            return ClassVerdict::Soluble;
        }
    }
    if k >= cap {
        return ClassVerdict::Unknown;
    }
    let pk = BigInt::from(p).pow(k);
    let mut unknown = false;
    for t in 0..p {
        let child = x0 + &pk * t;
        match class_square(c4, c0, &child, k + 1, p, cap) {
            ClassVerdict::Soluble => return ClassVerdict::Soluble,
            ClassVerdict::Unknown => unknown = true,
            ClassVerdict::Dead => {}
        }
    }
    if unknown {
        ClassVerdict::Unknown
    } else {
        ClassVerdict::Dead
    }
}

/// Local solubility of `N^2 = d x^4 + e y^4` over `Q_p`; `None` when undecided.
pub fn torsor_locally_soluble(d: i128, e: i128, p: u64) -> Option<bool> {
    let cap = if p == 2 { 40 } else { 16 };
    let (bd, be) = (BigInt::from(d), BigInt::from(e));
    let mut unknown = false;
    // Chart (x : 1) with x in Z_p: g(x) = d x^4 + e.
    for x0 in 0..p {
        match class_square(&bd, &be, &BigInt::from(x0), 1, p, cap) {
            ClassVerdict::Soluble => return Some(true),
            ClassVerdict::Unknown => unknown = true,
            ClassVerdict::Dead => {}
        }
    }
    // Chart (1 : y) with y in p Z_p: h(y) = e y^4 + d.
    match class_square(&be, &bd, &BigInt::zero(), 1, p, cap) {
        ClassVerdict::Soluble => return Some(true),
        ClassVerdict::Unknown => unknown = true,
        ClassVerdict::Dead => {}
    }
    if unknown {
        None
    } else {
        Some(false)
    }
}

const SQUARES_MOD_64: [bool; 64] = {
    let mut t = [false; 64];
    let mut i = 0;
    while i < 64 {
        t[(i * i) % 64] = true;
        i += 1;
    }
    t
};

/// Search `0 <= M <= bound`, `1 <= e <= bound` (coprime) for a point on the torsor.
pub fn torsor_point(d: i128, e_coef: i128, bound: i64) -> Option<(i128, i128, i128)> {
    if d == 1 {
        return Some((1, 0, 1));
    }
    for e in 1..=bound as i128 {
        let e4 = e.pow(4).checked_mul(e_coef)?;
        for m in 0..=bound as i128 {
            if m.gcd(&e) != 1 {
                continue;
            }
            let v = d.checked_mul(m.pow(4)).and_then(|x| x.checked_add(e4))?;
            if v < 0 || !SQUARES_MOD_64[(v & 63) as usize] {
                continue;
            }
            if let Some(n) = is_kth_power(v as u128, 2) {
                return Some((m, e, n as i128));
            }
        }
    }
    None
}

fn status_for(d: i128, a: i128, primes: &[u64], search: Option<i64>) -> TorsorStatus {
    let e = a / d;
    if d < 0 && e < 0 {
        return TorsorStatus::Insoluble { place: Place::Real };
    }
    let mut undecided = None;
    for &p in primes {
        match torsor_locally_soluble(d, e, p) {
            Some(true) => {}
            Some(false) => return TorsorStatus::Insoluble { place: Place::Prime(p) },
            None => undecided = undecided.or(Some(Place::Prime(p))),
        }
    }
    if let Some(bound) = search {
        if let Some((m, ee, n)) = torsor_point(d, e, bound) {
            return TorsorStatus::Point { m, e: ee, n };
        }
    }
    match undecided {
        Some(place) => TorsorStatus::Undetermined { place },
        None => TorsorStatus::LocallySoluble,
    }
}

fn side(a: i128, search: Option<i64>) -> Option<SelmerSide> {
    let mut primes: Vec<u64> = factorize(u64::try_from(a.unsigned_abs()).ok()?)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    if !primes.contains(&2) {
        primes.insert(0, 2);
    }
    let torsors = squarefree_divisors(a)?
        .into_iter()
        .map(|d| TorsorRecord {
            d,
            status: status_for(d, a, &primes, search),
        })
        .collect();
    Some(SelmerSide { a, torsors })
}

/// Run the descent on `y^2 = x^3 + A x`; `search` bounds the torsor point
/// search (`None` skips it). `None` when `4A` does not fit in 64 bits.
pub fn two_isogeny_descent(a: i128, search: Option<i64>) -> Option<IsogenyDescent> {
    assert!(a != 0);
    let dual_a = a.checked_mul(-4)?;
    u64::try_from(dual_a.unsigned_abs()).ok()?;
    let curve = side(a, search)?;
    let dual = side(dual_a, search)?;
    let bound = bound_from_counts(curve.possibly_soluble(), dual.possibly_soluble());
    Some(IsogenyDescent { curve, dual, bound })
}

/// Upper bound on the rank of `y^2 = x^3 + A x`.
pub fn rank_upper_bound(curve: &Curve) -> Option<u32> {
    assert!(curve.b == 0);
    two_isogeny_descent(curve.a, None).map(|d| d.bound)
}

/// Point on `y^2 = x^3 + A x` from a torsor point: `x = d M^2/e^2`, `y = d M N/e^3`.
pub fn torsor_to_point(d: i128, m: i128, e: i128, n: i128) -> RatPoint {
    if e == 0 {
        return RatPoint::Infinity;
    }
    let x = BigRational::new(BigInt::from(d) * BigInt::from(m).pow(2), BigInt::from(e).pow(2));
    let y = BigRational::new(
        BigInt::from(d) * BigInt::from(m) * BigInt::from(n),
        BigInt::from(e).pow(3),
    );
    RatPoint::Affine(x, y)
}

/// The dual isogeny `E' -> E`, `(X, Y) -> (Y^2/4X^2, Y(-4A - X^2)/8X^2)`.
pub fn dual_isogeny(a: i128, pt: &RatPoint) -> RatPoint {
    match pt {
        RatPoint::Infinity => RatPoint::Infinity,
        RatPoint::Affine(x, y) => {
            if x.is_zero() {
                return RatPoint::Infinity;
            }
            let x2 = x * x;
            let nx = y * y / (rat(4) * &x2);
            let ny = y * (rat(-4 * a) - &x2) / (rat(8) * &x2);
            RatPoint::Affine(nx, ny)
        }
    }
}

/// Sign-and-primes vector of a squarefree integer over F_2.
fn f2_vector(d: i128, primes: &[u64]) -> u64 {
    let mut v = u64::from(d < 0);
    for (i, p) in primes.iter().enumerate() {
        if d % *p as i128 == 0 {
            v |= 1 << (i + 1);
        }
    }
    v
}

/// Gaussian elimination over F_2; returns whether `v` extended the basis.
fn insert(basis: &mut Vec<u64>, mut v: u64) -> bool {
    for &b in basis.iter() {
        v = v.min(v ^ b);
    }
    if v == 0 {
        return false;
    }
    basis.push(v);
    basis.sort_unstable_by(|x, y| y.cmp(x));
    true
}

/// Squarefree part with sign, for the image of a rational x-coordinate.
fn squarefree_class(q: &BigRational) -> Option<i128> {
    let v = q.numer() * q.denom();
    if v.is_zero() {
        return None;
    }
    let sign: i128 = if v.is_negative() { -1 } else { 1 };
    let abs = v.abs().to_u64()?;
    let core: u64 = factorize(abs)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    Some(sign * core as i128)
}

/// Images of the rational 2-power torsion under `alpha` for `y^2 = x^3 + A x`.
fn torsion_images(a: i128) -> Vec<i128> {
    let mut out = vec![1i128];
    for t in torsion_subgroup(&Curve::short(a)) {
        if let RatPoint::Affine(x, _) = t {
            if x.is_zero() {
                out.push(squarefree_class(&rat(a)).unwrap());
            } else if let Some(c) = squarefree_class(&x) {
                out.push(c);
            }
        }
    }
    out
}

/// Points found by the search, their span, and a lower bound on the rank.
#[derive(Clone, Debug)]
pub struct FoundPoints {
    /// Non-torsion points on `E` (from both sides, mapped to `E`).
    pub generators: Vec<RatPoint>,
    pub lower_bound: u32,
}

impl IsogenyDescent {
    /// Combine found torsor points into independent generators on `E`.
    pub fn found_points(&self) -> FoundPoints {
        let a = self.curve.a;
        let mut generators = Vec::new();
        let mut dims = 0u32;
        for (sd, is_dual) in [(&self.curve, false), (&self.dual, true)] {
            let primes: Vec<u64> = factorize(sd.a.unsigned_abs() as u64).into_iter().map(|(p, _)| p).collect();
            let mut basis = Vec::new();
            for d in torsion_images(sd.a) {
                insert(&mut basis, f2_vector(d, &primes));
            }
            for t in &sd.torsors {
                if let TorsorStatus::Point { m, e, n } = t.status {
                    if insert(&mut basis, f2_vector(t.d, &primes)) {
                        let pt = torsor_to_point(t.d, m, e, n);
                        generators.push(if is_dual { dual_isogeny(a, &pt) } else { pt });
                    }
                }
            }
            dims += basis.len() as u32;
        }
        FoundPoints {
            generators,
            lower_bound: dims.saturating_sub(2),
        }
    }
}
