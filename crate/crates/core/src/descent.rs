//! Descent from `x^4 - y^4 = n z^4` to the octal equations
//! `a^2 u^8 + b^2 v^8 = c w^4`.
//!
//! Put `x - y`, `x + y` (halved when both are odd) as `s`, `t`. Then
//! `s t (s^2 + t^2) = n' r^4` with `s`, `t`, `s^2 + t^2` pairwise coprime,
//! so `s = a u^4`, `t = b v^4`, `s^2 + t^2 = c w^4` with `abc = n'`, and
//! `n'` is `2n`, or `n / 8` when `8 | n`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_kth_power};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityBranch {
    /// x, y odd and 8 | n: `t = (x+y)/2`, `s = (x-y)/2`, `r = z`, `n' = n/8`.
    BothOddEightDividesN,
    /// x, y odd and 8 ∤ n, so z is even: `t = (x+y)/2`, `s = (x-y)/2`, `r = z/2`, `n' = 2n`.
    BothOddZEven,
    /// x, y of opposite parity: `t = x+y`, `s = x-y`, `r = z`, `n' = 2n`.
    OppositeParity,
}

impl ParityBranch {
    pub fn substitution(self) -> &'static str {
        match self {
            ParityBranch::BothOddEightDividesN => "t=(x+y)/2, s=(x-y)/2, r=z",
            ParityBranch::BothOddZEven => "t=(x+y)/2, s=(x-y)/2, r=z/2",
            ParityBranch::OppositeParity => "t=x+y, s=x-y, r=z",
        }
    }
}

/// `a^2 u^8 + b^2 v^8 = c w^4` subject to
/// `gcd(au, bv) = gcd(au, cw) = gcd(bv, cw) = 1` and `uvw != 0`.
///
/// Triples are stored with `a >= b`; the mirrored triple `(b, a, c)` is the
/// same equation after swapping `(a, u)` with `(b, v)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OctalEquation {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
    pub n_prime: u64,
    pub branches: Vec<ParityBranch>,
}

impl OctalEquation {
    /// Build an equation directly from a triple (used by tests and tools).
    pub fn from_triple(a: u64, b: u64, c: u64) -> Self {
        OctalEquation {
            a,
            b,
            c,
            n: 0,
            n_prime: a * b * c,
            branches: Vec::new(),
        }
    }

    pub fn triple(&self) -> (u64, u64, u64) {
        (self.a, self.b, self.c)
    }

    /// Unordered `{a, b}` with `c`: the identity of the equation up to mirroring.
    pub fn class_key(&self) -> (u64, u64, u64) {
        (self.a.max(self.b), self.a.min(self.b), self.c)
    }

    /// Exact test of the equation and its side conditions.
    pub fn is_solution(&self, u: i64, v: i64, w: i64) -> bool {
        if u == 0 || v == 0 || w == 0 {
            return false;
        }
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (au, bv, cw) = (a * u as i128, b * v as i128, c * w as i128);
        if au.gcd(&bv) != 1 || au.gcd(&cw) != 1 || bv.gcd(&cw) != 1 {
            return false;
        }
        let big = |x: i128| BigInt::from(x);
        let lhs = big(a * a) * big(u as i128).pow(8) + big(b * b) * big(v as i128).pow(8);
        lhs == big(c) * big(w as i128).pow(4)
    }
}

/// The values `n'` with their parity branches for fourth-power-free `n`.
pub fn n_prime_branches(n: u64) -> Vec<(u64, Vec<ParityBranch>)> {
    let mut out = Vec::new();
    if n % 8 == 0 {
        out.push((2 * n, vec![ParityBranch::OppositeParity]));
        out.push((n / 8, vec![ParityBranch::BothOddEightDividesN]));
    } else {
        out.push((
            2 * n,
            vec![ParityBranch::BothOddZEven, ParityBranch::OppositeParity],
        ));
    }
    out
}

/// All octal equations for `n`, one per class of unordered `{a, b}` and `c`.
pub fn reduce_to_triples(n: u64) -> Vec<OctalEquation> {
    let mut out = Vec::new();
    for (n_prime, branches) in n_prime_branches(n) {
        let powers: Vec<u64> = factorize(n_prime)
            .into_iter()
            .map(|(p, e)| p.pow(e))
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        let total = 3usize.pow(powers.len() as u32);
        for code in 0..total {
            let (mut a, mut b, mut c) = (1u64, 1u64, 1u64);
            let mut rest = code;
            for q in &powers {
                match rest % 3 {
                    0 => a *= q,
                    1 => b *= q,
                    _ => c *= q,
                }
                rest /= 3;
            }
            let (a, b) = (a.max(b), a.min(b));
            if seen.insert((a, b, c)) {
                out.push(OctalEquation {
                    a,
                    b,
                    c,
                    n,
                    n_prime,
                    branches: branches.clone(),
                });
            }
        }
    }
    out.sort_by_key(|e| (e.n_prime, e.c, e.a, e.b));
    out
}

/// Image of a positive solution `(x, y, z)` of `x^4 - y^4 = n z^4` under the
/// descent: `(branch, n', s, t, r)` with `st(s^2+t^2) = n' r^4`.
pub fn descend_solution(n: u64, x: u64, y: u64, z: u64) -> (ParityBranch, u64, u64, u64, u64) {
    assert!(x > y && y > 0 && z > 0);
    if x % 2 == 1 && y % 2 == 1 {
        let (t, s) = ((x + y) / 2, (x - y) / 2);
        if n % 8 == 0 {
            (ParityBranch::BothOddEightDividesN, n / 8, s, t, z)
        } else {
            (ParityBranch::BothOddZEven, 2 * n, s, t, z / 2)
        }
    } else {
        (ParityBranch::OppositeParity, 2 * n, x - y, x + y, z)
    }
}

/// Split a value of `s` (or `t`, `s^2+t^2`) into coefficient and fourth power
/// using the primes of `n'`. Returns `(coef, root)` with `value = coef * root^4`.
pub fn split_coefficient(value: u64, n_prime: u64) -> Option<(u64, u64)> {
    let mut coef = 1u64;
    for (p, e) in factorize(n_prime) {
        if value % p == 0 {
            coef *= p.pow(e);
        }
    }
    if value % coef != 0 {
        return None;
    }
    let root = is_kth_power((value / coef) as u128, 4)?;
    Some((coef, root as u64))
}

/// Which side of an octal equation carries the perfect square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareSide {
    A,
    B,
}

/// Elimination by Mordell's theorem that `X^4 - Y^4 = Z^2` forces `XYZ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MordellStep {
    /// `c = kappa^4`.
    pub kappa: u64,
    pub side: SquareSide,
    /// The square root of the coefficient on `side`.
    pub root: u64,
    pub relation: String,
}

/// If `c = kappa^4` and `a` or `b` is a square, the equation becomes
/// `(kappa w)^4 - (root * v^2)^4 = (a u^4)^2` (or the mirror), which has only
/// solutions with a zero coordinate.
pub fn mordell_filter(eq: &OctalEquation) -> Option<MordellStep> {
    let kappa = is_kth_power(eq.c as u128, 4)? as u64;
    if let Some(beta) = is_kth_power(eq.b as u128, 2) {
        return Some(MordellStep {
            kappa,
            side: SquareSide::B,
            root: beta as u64,
            relation: format!("({kappa}w)^4 - ({beta}v^2)^4 = ({}u^4)^2", eq.a),
        });
    }
    if let Some(alpha) = is_kth_power(eq.a as u128, 2) {
        return Some(MordellStep {
            kappa,
            side: SquareSide::A,
            root: alpha as u64,
            relation: format!("({kappa}w)^4 - ({alpha}u^2)^4 = ({}v^4)^2", eq.b),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classes(n: u64) -> Vec<(u64, u64, u64)> {
        let mut v: Vec<_> = reduce_to_triples(n).iter().map(|e| e.class_key()).collect();
        v.sort();
        v
    }

    #[test]
    fn triples_for_31() {
        let mut expected = vec![(1, 1, 62), (2, 1, 31), (31, 1, 2), (62, 1, 1), (31, 2, 1)];
        expected.sort();
        assert_eq!(classes(31), expected);
    }

    #[test]
    fn triples_for_2() {
        assert_eq!(classes(2), vec![(1, 1, 4), (4, 1, 1)]);
    }

    #[test]
    fn eight_divides_n_adds_second_family() {
        let eqs = reduce_to_triples(24);
        assert!(eqs.iter().any(|e| e.n_prime == 3));
        assert!(eqs.iter().any(|e| e.n_prime == 48));
        for e in &eqs {
            assert_eq!(e.a * e.b * e.c, e.n_prime);
            assert_eq!(e.a.gcd(&e.b), 1);
            assert_eq!(e.a.gcd(&e.c), 1);
            assert_eq!(e.b.gcd(&e.c), 1);
        }
    }

    #[test]
    fn mordell_examples() {
        let s = mordell_filter(&OctalEquation::from_triple(62, 1, 1)).unwrap();
        assert_eq!((s.kappa, s.side, s.root), (1, SquareSide::B, 1));
        assert!(mordell_filter(&OctalEquation::from_triple(2, 31, 1)).is_none());
        let s = mordell_filter(&OctalEquation::from_triple(3, 4, 16)).unwrap();
        assert_eq!((s.kappa, s.side, s.root), (2, SquareSide::B, 2));
        assert!(mordell_filter(&OctalEquation::from_triple(1, 1, 62)).is_none());
    }

    #[test]
    fn known_solution_descends() {
        // 3^4 - 1^4 = 5 * 2^4, both odd, z even.
        let (branch, n_prime, s, t, r) = descend_solution(5, 3, 1, 2);
        assert_eq!(branch, ParityBranch::BothOddZEven);
        assert_eq!((n_prime, s, t, r), (10, 1, 2, 1));
        assert_eq!(split_coefficient(s * s + t * t, n_prime), Some((5, 1)));
    }
}
