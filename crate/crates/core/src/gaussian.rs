//! Factoring over the Gaussian integers.
//!
//! A solution of `a^2 u^8 + b^2 v^8 = c w^4` factors as
//! `(a u^4 + b v^4 i)(a u^4 - b v^4 i) = c w^4`. The coprimality conditions
//! force `a u^4 + b v^4 i = i^eps alpha (s + t i)^4` for one of finitely many
//! `alpha | c`. Each case is a pair of binary quartic equations
//! `F(s,t) = a u^4`, `G(s,t) = b v^4`, eliminated either by a classical
//! quartic whose solutions are known, or by local insolubility.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_kth_power, sqrt_minus_one};
use crate::descent::OctalEquation;
use crate::local::{
    default_depth, scheme_local_solubility, BinaryQuartic, LocalVerdict, QuarticSystem, UnitConstraints,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GaussInt {
    #[serde(with = "crate::wide")]
    pub re: i128,
    #[serde(with = "crate::wide")]
    pub im: i128,
}

impl GaussInt {
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };
    pub const ONE_PLUS_I: GaussInt = GaussInt { re: 1, im: 1 };

    pub const fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn norm(&self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(&self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(GaussInt::ONE, |acc, _| acc * *self)
    }

    /// `i^k`.
    pub fn unit(k: u8) -> Self {
        GaussInt::I.pow(k as u32 % 4)
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Quotient rounded to the nearest lattice point, and the remainder.
    pub fn div_rem(&self, d: &GaussInt) -> (GaussInt, GaussInt) {
        let n = d.norm();
        assert!(n != 0, "division by zero");
        let num = *self * d.conj();
        let round = |x: i128| (2 * x + n).div_euclid(2 * n);
        let q = GaussInt::new(round(num.re), round(num.im));
        (q, *self - q * *d)
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &GaussInt) -> Option<GaussInt> {
        let (q, r) = self.div_rem(d);
        (r == GaussInt::new(0, 0)).then_some(q)
    }

    pub fn gcd(a: GaussInt, b: GaussInt) -> GaussInt {
        let (mut x, mut y) = (a, b);
        while y != GaussInt::new(0, 0) {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x
    }

    /// The associate with `re > 0` and `re >= |im|`, preferring `im > 0` on ties.
    pub fn normalized(&self) -> GaussInt {
        (0..4)
            .map(|k| *self * GaussInt::unit(k))
            .filter(|z| z.re > 0 && z.re >= z.im.abs())
            .max_by_key(|z| z.im)
            .unwrap_or(*self)
    }

    /// The `k` with `self = i^k * other`, if they are associates.
    pub fn unit_ratio(&self, other: &GaussInt) -> Option<u8> {
        (0..4u8).find(|&k| other.mul(GaussInt::unit(k)) == *self)
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;
    fn mul(self, o: GaussInt) -> GaussInt {
        GaussInt::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, i) => write!(f, "{i}i"),
            (r, i) if i < 0 => write!(f, "{r}-{}i", -i),
            (r, i) => write!(f, "{r}+{i}i"),
        }
    }
}

/// `N = unit * prod pi^e` with each prime normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussFactorization {
    pub unit: GaussInt,
    pub factors: Vec<(GaussInt, u32)>,
}

impl GaussFactorization {
    pub fn product(&self) -> GaussInt {
        self.factors
            .iter()
            .fold(self.unit, |acc, (p, e)| acc * p.pow(*e))
    }
}

/// The normalized Gaussian prime above a rational prime `p = 1 mod 4` with positive imaginary part.
pub fn split_prime(p: u64) -> GaussInt {
    assert!(p % 4 == 1);
    let r = sqrt_minus_one(p) as i128;
    let pi = GaussInt::gcd(GaussInt::new(p as i128, 0), GaussInt::new(r, 1)).normalized();
    if pi.im > 0 {
        pi
    } else {
        pi.conj().normalized()
    }
}

/// Factor a positive rational integer in `Z[i]`.
pub fn gauss_factor(n: u64) -> GaussFactorization {
    assert!(n >= 1);
    let mut factors = Vec::new();
    for (p, e) in factorize(n) {
        match p % 4 {
            2 => factors.push((GaussInt::ONE_PLUS_I, 2 * e)),
            3 => factors.push((GaussInt::new(p as i128, 0), e)),
            _ => {
                let pi = split_prime(p);
                factors.push((pi, e));
                factors.push((pi.conj().normalized(), e));
            }
        }
    }
    let partial = factors.iter().fold(GaussInt::ONE, |acc, (p, e)| acc * p.pow(*e));
    let unit = GaussInt::new(n as i128, 0)
        .div_exact(&partial)
        .expect("factors divide n");
    assert!(unit.is_unit());
    GaussFactorization { unit, factors }
}

/// One case `a u^4 + b v^4 i = i^epsilon alpha (s + t i)^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AlphaCase {
    pub alpha: GaussInt,
    pub epsilon: u8,
}

impl AlphaCase {
    /// `i^epsilon alpha`.
    pub fn multiplier(&self) -> GaussInt {
        GaussInt::unit(self.epsilon) * self.alpha
    }
}

/// The possible `alpha` (normalized) for an equation, crossed with the four units.
///
/// No rational prime divides `a u^4 + b v^4 i`, so a split prime contributes
/// only one of its two conjugates, inert primes cannot divide `c`, and the
/// power of `1 + i` is `v_2(c) <= 1`. Exponents are reduced modulo 4.
pub fn enumerate_alpha(eq: &OctalEquation) -> Vec<AlphaCase> {
    if eq.c % 4 == 0 {
        return Vec::new();
    }
    let mut alphas = vec![if eq.c % 2 == 0 {
        GaussInt::ONE_PLUS_I
    } else {
        GaussInt::ONE
    }];
    for (p, e) in factorize(eq.c) {
        match p % 4 {
            2 => {}
            3 => return Vec::new(),
            _ if e % 4 == 0 => {}
            _ => {
                let pi = split_prime(p).pow(e % 4);
                let pi_bar = pi.conj();
                alphas = alphas
                    .iter()
                    .flat_map(|&x| [x * pi, x * pi_bar])
                    .collect();
            }
        }
    }
    alphas
        .into_iter()
        .flat_map(|x| {
            let alpha = x.normalized();
            (0..4).map(move |epsilon| AlphaCase { alpha, epsilon })
        })
        .collect()
}

/// `F + G i = i^epsilon alpha (s + t i)^4`, with `F = a u^4`, `G = b v^4`.
pub fn expand_case(case: &AlphaCase, a: u64, b: u64) -> QuarticSystem {
    let m = case.multiplier();
    // (s + t i)^4 = s^4 + 4 i s^3 t - 6 s^2 t^2 - 4 i s t^3 + t^4.
    let binom = [
        GaussInt::new(1, 0),
        GaussInt::new(0, 4),
        GaussInt::new(-6, 0),
        GaussInt::new(0, -4),
        GaussInt::new(1, 0),
    ];
    let coeffs = binom.map(|c| m * c);
    let narrow = |x: i128| i64::try_from(x).expect("coefficient fits i64");
    QuarticSystem::bare(
        BinaryQuartic(coeffs.map(|z| narrow(z.re))),
        BinaryQuartic(coeffs.map(|z| narrow(z.im))),
        a as i64,
        b as i64,
    )
}

/// Unit conditions at `p` implied by the coprimality of `au`, `bv`, `cw`
/// and by `gcd(s, t) = 1`.
pub fn derived_constraints(eq: &OctalEquation, p: u64) -> UnitConstraints {
    UnitConstraints {
        st_primitive: true,
        u_unit: eq.c % p == 0 || eq.b % p == 0,
        v_unit: eq.c % p == 0 || eq.a % p == 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassicalShape {
    /// `s^4 - 6 s^2 t^2 + t^4`: `X^4 - 6X^2Y^2 + Y^4 = Z^2` forces `XY = 0`.
    MordellQuartic,
    /// `s^4 - t^4`: `X^4 - Y^4 = Z^2` forces `XYZ = 0`.
    DifferenceOfFourth,
}

impl ClassicalShape {
    pub fn coefficients(self) -> [i64; 5] {
        match self {
            ClassicalShape::MordellQuartic => [1, 0, -6, 0, 1],
            ClassicalShape::DifferenceOfFourth => [1, 0, 0, 0, -1],
        }
    }
}

/// One equation is `lambda * Q(s,t) = coef * y^4` for a classical `Q`, so
/// every primitive solution has `(s : t)` among `candidates`; none of them
/// solves both equations with `u v != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalStep {
    pub equation: Equation,
    pub shape: ClassicalShape,
    pub lambda: i64,
    pub candidates: Vec<(i64, i64)>,
}

/// Is `num / den` the fourth power of a nonzero rational?
pub fn positive_rational_fourth_power(num: i128, den: i128) -> bool {
    if num == 0 || den == 0 || (num < 0) != (den < 0) {
        return false;
    }
    let (num, den) = (num.unsigned_abs(), den.unsigned_abs());
    let g = num_integer::gcd(num, den);
    is_kth_power(num / g, 4).is_some() && is_kth_power(den / g, 4).is_some()
}

/// Does `(s, t)` extend to a solution with `u v != 0`?
pub fn candidate_survives(sys: &QuarticSystem, s: i64, t: i64) -> bool {
    let (s, t) = (s as i128, t as i128);
    positive_rational_fourth_power(sys.f.eval(s, t), sys.a as i128)
        && positive_rational_fourth_power(sys.g.eval(s, t), sys.b as i128)
}

fn match_shape(form: &BinaryQuartic, coef: i64, shape: ClassicalShape) -> Option<(i64, Vec<(i64, i64)>)> {
    let q = shape.coefficients();
    let lambda = form.0[0];
    if lambda == 0 || form.0.iter().zip(q).any(|(&c, qc)| c != lambda * qc) {
        return None;
    }
    // Q(s,t) = gamma y^4 with gamma = coef / lambda.
    let (num, den) = (coef as i128 * lambda.signum() as i128, lambda.unsigned_abs() as i128);
    let square = |x: i128| x > 0 && is_kth_power(x as u128, 2).is_some();
    let g = num_integer::gcd(num.unsigned_abs(), den as u128) as i128;
    let (num, den) = (num / g, den / g);
    let ends = vec![(1, 0), (0, 1)];
    let diagonals = vec![(1, 1), (1, -1)];
    match shape {
        ClassicalShape::MordellQuartic if num > 0 && square(num) && square(den) => Some((lambda, ends)),
        // -Q(s,t) = beta^2 y^4 gives Q(s-t, s+t) = (2 beta y^2)^2, so s = +-t.
        ClassicalShape::MordellQuartic if num < 0 && square(-num) && square(den) => Some((lambda, diagonals)),
        ClassicalShape::DifferenceOfFourth if square(num.abs()) && square(den) => {
            Some((lambda, ends.into_iter().chain(diagonals).collect()))
        }
        _ => None,
    }
}

/// Eliminate a system through a classical quartic, if one equation has that shape.
pub fn classical_form_filter(sys: &QuarticSystem) -> Option<ClassicalStep> {
    let sides = [(Equation::F, sys.f, sys.a), (Equation::G, sys.g, sys.b)];
    for (equation, form, coef) in sides {
        for shape in [ClassicalShape::MordellQuartic, ClassicalShape::DifferenceOfFourth] {
            if let Some((lambda, candidates)) = match_shape(&form, coef, shape) {
                if candidates.iter().all(|&(s, t)| !candidate_survives(sys, s, t)) {
                    return Some(ClassicalStep {
                        equation,
                        shape,
                        lambda,
                        candidates,
                    });
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mechanism", rename_all = "kebab-case")]
pub enum CaseElimination {
    Classical(ClassicalStep),
    /// No `Q_p`-points on the scheme, unit constraints as recorded.
    Local {
        p: u64,
        level: u32,
        constraints: UnitConstraints,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianCase {
    pub case: AlphaCase,
    pub system: QuarticSystem,
    pub elimination: CaseElimination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianStep {
    pub cases: Vec<GaussianCase>,
}

/// Try the classical filter, then each prime (bare scheme first, then with
/// the unit constraints the coprimality conditions impose).
pub fn eliminate_case(eq: &OctalEquation, case: &AlphaCase, primes: &[u64], depth: Option<u32>) -> Option<CaseElimination> {
    let system = expand_case(case, eq.a, eq.b);
    if let Some(step) = classical_form_filter(&system) {
        return Some(CaseElimination::Classical(step));
    }
    for &p in primes {
        let d = depth.unwrap_or_else(|| default_depth(p));
        let constrained = derived_constraints(eq, p);
        for constraints in [UnitConstraints::default(), constrained] {
            let sys = system.with_constraints(constraints);
            if let LocalVerdict::Insoluble { level } = scheme_local_solubility(&sys, p, d) {
                return Some(CaseElimination::Local { p, level, constraints });
            }
        }
    }
    None
}

/// A step when every case is eliminated.
pub fn decide_gaussian(eq: &OctalEquation, primes: &[u64], depth: Option<u32>) -> Option<GaussianStep> {
    let cases = enumerate_alpha(eq);
    let eliminated: Option<Vec<GaussianCase>> = cases
        .par_iter()
        .map(|case| {
            let elimination = eliminate_case(eq, case, primes, depth)?;
            Some(GaussianCase {
                case: *case,
                system: expand_case(case, eq.a, eq.b),
                elimination,
            })
        })
        .collect();
    eliminated.map(|cases| GaussianStep { cases })
}
