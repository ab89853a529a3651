//! Randomized property checks shared by the property suite and the
//! acceptance report. Each runs 1000 cases and returns the first failure.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use quartdiff_core::arith::{coprime_split, factorize, is_kth_power, primes_up_to, two_monomial_split};
use quartdiff_core::descent::OctalEquation;
use quartdiff_core::elliptic::maps::{octal_solutions_mod_p, CurveMap, MapImage, MapKind};
use quartdiff_core::elliptic::{Curve, FpCurve, RatPoint};
use quartdiff_core::gaussian::{enumerate_alpha, expand_case};
use quartdiff_core::local::{scheme_local_solubility, BinaryQuartic, LocalVerdict, QuarticSystem, UnitConstraints};

pub const TRIALS: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: TRIALS,
        failure_persistence: None,
        ..Config::default()
    })
}

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// `y^2 = x^3 + A x` through `(x0, x0 k)`: `A = x0 (k^2 - x0)`.
fn curve_through(x0: i128, k: i128) -> (Curve, RatPoint) {
    let a = x0 * (k * k - x0);
    (Curve::short(a), RatPoint::from_ints(x0, x0 * k))
}

/// Reduction modulo a prime of good reduction `p <= 97` respects the group law.
pub fn reduction_is_a_homomorphism() -> Result<(), String> {
    let strategy = (1i128..40, 1i128..40, 1i64..4, 1i64..4, 0usize..24);
    finish(runner().run(&strategy, |(x0, k, m1, m2, pi)| {
        prop_assume!(k * k != x0);
        let (curve, pt) = curve_through(x0, k);
        let p = primes_up_to(97)[1 + pi % 24];
        let Some(fp) = FpCurve::new(&curve, p) else {
            return Ok(());
        };
        let t = RatPoint::from_ints(0, 0);
        let s = curve.mul(m1, &pt);
        let u = curve.add(&curve.mul(m2, &pt), &t);
        let sum = fp.add(&fp.reduce_point(&s), &fp.reduce_point(&u));
        prop_assert_eq!(fp.reduce_point(&curve.add(&s, &u)), sum);
        prop_assert_eq!(fp.reduce_point(&curve.neg(&s)), fp.neg(&fp.reduce_point(&s)));
        Ok(())
    }))
}

/// Values of `c` admitting Gaussian cases: no factor 4 and no prime `3 mod 4`.
pub fn sums_of_coprime_squares() -> &'static [u64] {
    static GOODS: OnceLock<Vec<u64>> = OnceLock::new();
    GOODS.get_or_init(|| {
        (1..20000u64)
            .filter(|c| c % 4 != 0 && factorize(*c).iter().all(|(p, _)| p % 4 != 3))
            .collect()
    })
}

/// `F^2 + G^2 = N(alpha) (s^2 + t^2)^4` for every enumerated case.
pub fn norm_identity() -> Result<(), String> {
    let strategy = (0usize..400, 1u64..60, 1u64..60);
    finish(runner().run(&strategy, |(c_index, a, b)| {
        let goods = sums_of_coprime_squares();
        let c = goods[c_index * 7 % goods.len()];
        let eq = OctalEquation::from_triple(a.max(b), a.min(b), c);
        let cases = enumerate_alpha(&eq);
        prop_assert!(!cases.is_empty());
        for case in cases {
            let sys = expand_case(&case, eq.a, eq.b);
            let mut lhs = [0i128; 9];
            for i in 0..5 {
                for j in 0..5 {
                    lhs[i + j] += (sys.f.0[i] as i128) * (sys.f.0[j] as i128) + (sys.g.0[i] as i128) * (sys.g.0[j] as i128);
                }
            }
            let norm = case.alpha.norm();
            let rhs = [1i128, 0, 4, 0, 6, 0, 4, 0, 1].map(|x| x * norm);
            prop_assert_eq!(lhs, rhs);
        }
        Ok(())
    }))
}

/// Images of every residue solution modulo `p <= 13` lie on the reduced curve.
pub fn map_images_lie_on_the_curve() -> Result<(), String> {
    let strategy = (1u64..30, 1u64..30, 1u64..30, 1u64..200, 0usize..5);
    finish(runner().run(&strategy, |(a, b, c, n, pi)| {
        let p = [3u64, 5, 7, 11, 13][pi];
        let eq = OctalEquation::from_triple(a, b, c);
        for kind in [MapKind::HardI, MapKind::HardII, MapKind::HardIII] {
            let map = CurveMap::hard(kind, a, b, c);
            let Some(fp) = FpCurve::new(&map.curve(), p) else { continue };
            for t in octal_solutions_mod_p(&eq, p) {
                if let MapImage::Point(pt) = map.image_mod_p(t, p) {
                    prop_assert!(fp.contains(&pt), "{:?} {:?} mod {}", kind, t, p);
                }
            }
        }
        for kind in [MapKind::EasyI, MapKind::EasyII, MapKind::EasyIII] {
            let map = CurveMap::easy(kind, n);
            let Some(fp) = FpCurve::new(&map.curve(), p) else { continue };
            for x in 0..p {
                for y in 0..p {
                    for z in 0..p {
                        if (x.pow(4) + p - y.pow(4) % p) % p != n % p * z.pow(4) % p {
                            continue;
                        }
                        if let MapImage::Point(pt) = map.image_mod_p([x, y, z], p) {
                            prop_assert!(fp.contains(&pt), "{:?} ({},{},{}) mod {}", kind, x, y, z, p);
                        }
                    }
                }
            }
        }
        Ok(())
    }))
}

/// Is `m / d` (resp. `n / e`) a fourth power for some listed split of `A`?
pub fn covered(a: u64, m: u64, n: u64) -> bool {
    let fourth = |x: u64, d: u64| x % d == 0 && is_kth_power((x / d) as u128, 4).is_some();
    two_monomial_split(a).iter().any(|&(d, e)| fourth(m, d) && fourth(n, e))
}

/// A coprime factorization of `A u^4 / 2` into `m n` always matches a split.
pub fn split_covers_random_factorizations() -> Result<(), String> {
    let strategy = (1u64..=30, 1u64..=12, any::<u32>());
    finish(runner().run(&strategy, |(a, u, mask)| {
        let total = a * u.pow(4);
        prop_assume!(total % 2 == 0);
        let parts = coprime_split(total / 2);
        let (m, n) = parts[mask as usize % parts.len()];
        prop_assume!((m + n) % 2 == 1);
        prop_assert!(covered(a, m, n));
        Ok(())
    }))
}

/// Every coprime `(m, n)` of opposite parity with `m, n <= 200` and
/// `2 m n = A u^4`, `A <= 30`, matches one of the splits of `A`.
/// Returns the number of instances checked.
pub fn split_completeness_exhaustive() -> Result<usize, String> {
    let mut checked = 0;
    for m in 1..=200u64 {
        for n in 1..=200u64 {
            if (m + n) % 2 == 0 || m.gcd(&n) != 1 {
                continue;
            }
            let two_mn = 2 * m * n;
            for u in 1u64.. {
                let u4 = u.pow(4);
                if u4 > two_mn {
                    break;
                }
                if two_mn % u4 == 0 && two_mn / u4 <= 30 {
                    if !covered(two_mn / u4, m, n) {
                        return Err(format!("A = {}, m = {m}, n = {n}", two_mn / u4));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// Is there a primitive tuple modulo `p^k` with both residuals zero?
fn brute_force_has_solution(sys: &QuarticSystem, p: u64, k: u32) -> bool {
    let m = p.pow(k) as i128;
    let c = sys.constraints;
    let ev = |q: &BinaryQuartic, s: i128, t: i128| (0..5).map(|j| q.0[j] as i128 * s.pow(4 - j as u32) * t.pow(j as u32)).sum::<i128>();
    for s in 0..m {
        for t in 0..m {
            let fs = ev(&sys.f, s, t);
            let gs = ev(&sys.g, s, t);
            for u in 0..m {
                if (fs - sys.a as i128 * u.pow(4)).rem_euclid(m) != 0 {
                    continue;
                }
                for v in 0..m {
                    let zero = |x: i128| x % p as i128 == 0;
                    if zero(s) && zero(t) && zero(u) && zero(v) {
                        continue;
                    }
                    if c.st_primitive && zero(s) && zero(t) || c.u_unit && zero(u) || c.v_unit && zero(v) {
                        continue;
                    }
                    if (gs - sys.b as i128 * v.pow(4)).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Insoluble verdicts at `p = 2, 3`, `k <= 3` agree with a brute force over all tuples.
pub fn scheme_insolubility_matches_brute_force() -> Result<(), String> {
    let strategy = (
        proptest::array::uniform5(-4i64..=4),
        proptest::array::uniform5(-4i64..=4),
        1i64..=6,
        1i64..=6,
        any::<bool>(),
        0u8..8,
        1u32..=3,
    );
    finish(runner().run(&strategy, |(f, g, a, b, p_is_3, flags, depth)| {
        let p = if p_is_3 { 3 } else { 2 };
        let constraints = UnitConstraints {
            st_primitive: flags & 1 == 1,
            u_unit: flags & 2 == 2,
            v_unit: flags & 4 == 4,
        };
        let sys = QuarticSystem::bare(BinaryQuartic(f), BinaryQuartic(g), a, b).with_constraints(constraints);
        let verdict = scheme_local_solubility(&sys, p, depth);
        let level = match verdict {
            LocalVerdict::Insoluble { level } => level,
            _ => depth + 1,
        };
        for k in 1..=depth.min(level) {
            prop_assert_eq!(brute_force_has_solution(&sys, p, k), k < level, "k = {}, {:?}", k, verdict);
        }
        Ok(())
    }))
}
