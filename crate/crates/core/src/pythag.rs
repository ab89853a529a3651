//! Pythagorean descent for octal equations with square `c`.
//!
//! When `c = k^2`, a solution gives the primitive Pythagorean triple
//! `(a u^4)^2 + (b v^4)^2 = (k w^2)^2`. The even leg is `2mn` and the odd
//! leg is `m^2 - n^2`. Splitting `2mn = A u^4` into `m = d U^4`, `n = e V^4`
//! turns the odd leg into `d^2 U^8 - e^2 V^8 = B v^4`, which is then tested
//! for a local obstruction.

use serde::{Deserialize, Serialize};

use crate::arith::{is_kth_power, primes_up_to, two_monomial_split};
use crate::descent::OctalEquation;
use crate::local::{obstruct_mod_prime_power, DiagonalForm, LocalObstruction, MAX_MODULUS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PythagBranch {
    /// One of `a, b` is even and sits on the `2mn` side.
    OppositeParity,
    /// Both odd; the leg with the even variable sits on the `2mn` side.
    BothOdd,
}

/// `2mn = even_side * x^4`, `m^2 - n^2 = odd_side * y^4`, `m^2 + n^2 = k w^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagSystem {
    pub branch: PythagBranch,
    pub k_root: u64,
    pub even_side: u64,
    pub odd_side: u64,
}

/// `d^2 U^8 - e^2 V^8 = B v^4` with `gcd(dU, eV) = gcd(dU, Bv) = gcd(eV, Bv) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedOctal {
    pub d: u64,
    pub e: u64,
    pub b: u64,
}

impl DerivedOctal {
    pub fn form(&self) -> DiagonalForm {
        DiagonalForm::derived(self.d, self.e, self.b)
    }
}

/// The parametrized systems of an equation; empty unless `c` is a square.
pub fn pythag_systems(eq: &OctalEquation) -> Vec<PythagSystem> {
    let Some(k) = is_kth_power(eq.c as u128, 2) else {
        return Vec::new();
    };
    let k_root = k as u64;
    let (a, b) = (eq.a, eq.b);
    let make = |branch, even_side, odd_side| PythagSystem {
        branch,
        k_root,
        even_side,
        odd_side,
    };
    match (a % 2, b % 2) {
        (0, 1) => vec![make(PythagBranch::OppositeParity, a, b)],
        (1, 0) => vec![make(PythagBranch::OppositeParity, b, a)],
        (1, 1) => vec![
            make(PythagBranch::BothOdd, a, b),
            make(PythagBranch::BothOdd, b, a),
        ],
        _ => panic!("a and b cannot both be even"),
    }
}

/// One derived equation per split `(d, e)` of the `2mn` coefficient.
pub fn pythag_descend(sys: &PythagSystem) -> Vec<DerivedOctal> {
    two_monomial_split(sys.even_side)
        .into_iter()
        .map(|(d, e)| DerivedOctal {
            d,
            e,
            b: sys.odd_side,
        })
        .collect()
}

/// Moduli `p^k` tried for the derived equations, in ascending order.
pub fn candidate_moduli(prime_cap: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in primes_up_to(prime_cap) {
        let mut m = p;
        let mut k = 1;
        while m <= prime_cap.max(16) && m <= MAX_MODULUS {
            out.push((p, k));
            m *= p;
            k += 1;
        }
    }
    out.sort_by_key(|&(p, k)| p.pow(k));
    out
}

/// First obstructing modulus for a derived equation.
pub fn obstruct_derived(derived: &DerivedOctal, moduli: &[(u64, u32)]) -> Option<LocalObstruction> {
    let form = derived.form();
    moduli.iter().find_map(|&(p, k)| {
        obstruct_mod_prime_power(&form, p, k).filter(|o| o.k == k)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagCase {
    pub system: PythagSystem,
    pub derived: DerivedOctal,
    pub obstruction: LocalObstruction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PythagStep {
    pub cases: Vec<PythagCase>,
}

/// A step when every derived equation of every system is obstructed.
pub fn pythag_eliminate(eq: &OctalEquation, prime_cap: u64) -> Option<PythagStep> {
    let systems = pythag_systems(eq);
    if systems.is_empty() {
        return None;
    }
    let moduli = candidate_moduli(prime_cap);
    let mut cases = Vec::new();
    for system in systems {
        for derived in pythag_descend(&system) {
            let obstruction = obstruct_derived(&derived, &moduli)?;
            cases.push(PythagCase {
                system,
                derived,
                obstruction,
            });
        }
    }
    Some(PythagStep { cases })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(eq: &OctalEquation) -> Vec<Vec<(u64, u64)>> {
        pythag_systems(eq)
            .iter()
            .map(|s| pythag_descend(s).iter().map(|d| (d.d, d.e)).collect())
            .collect()
    }

    #[test]
    fn systems() {
        let s = pythag_systems(&OctalEquation::from_triple(6, 295, 1));
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].even_side, s[0].odd_side), (6, 295));
        assert_eq!(pythag_systems(&OctalEquation::from_triple(71, 15, 1)).len(), 2);
        assert!(pythag_systems(&OctalEquation::from_triple(31, 1, 2)).is_empty());
    }

    #[test]
    fn splits() {
        assert_eq!(pairs(&OctalEquation::from_triple(6, 295, 1)), vec![vec![(1, 3), (3, 1)]]);
        let both = pairs(&OctalEquation::from_triple(71, 15, 1));
        assert_eq!(both[0], vec![(1, 568), (8, 71), (71, 8), (568, 1)]);
        assert_eq!(both[1], vec![(1, 120), (3, 40), (5, 24), (8, 15), (15, 8), (24, 5), (40, 3), (120, 1)]);
    }

    #[test]
    fn derived_equation_for_885() {
        let d = DerivedOctal { d: 3, e: 1, b: 295 };
        assert_eq!(obstruct_mod_prime_power(&d.form(), 3, 1), Some(LocalObstruction { p: 3, k: 1 }));
    }

    #[test]
    fn eliminates_885_and_3503() {
        let step = pythag_eliminate(&OctalEquation::from_triple(6, 295, 1), 229).unwrap();
        let got: Vec<(u64, u64, u64)> = step
            .cases
            .iter()
            .map(|c| (c.derived.d, c.derived.e, c.obstruction.modulus()))
            .collect();
        assert_eq!(got, vec![(1, 3, 5), (3, 1, 3)]);
        let step = pythag_eliminate(&OctalEquation::from_triple(226, 31, 1), 229).unwrap();
        let got: Vec<(u64, u64, u64)> = step
            .cases
            .iter()
            .map(|c| (c.derived.d, c.derived.e, c.obstruction.modulus()))
            .collect();
        assert_eq!(got, vec![(1, 113, 113), (113, 1, 5)]);
    }

    #[test]
    fn unobstructed_equation_is_kept() {
        // 2mn = 2, m^2 - n^2 = 1 has no obstruction: (U, V, v) = (1, 0, 1) is admissible everywhere.
        assert!(pythag_eliminate(&OctalEquation::from_triple(2, 1, 1), 229).is_none());
    }
}
