//! Local solubility.
//!
//! Two engines live here. The first proves that a diagonal equation
//! `sum c_i x_i^{e_i} = 0` has no solution modulo `p^k` that respects the
//! pairwise-coprimality side conditions. The second decides whether the
//! projective scheme `F(s,t) = a u^4, G(s,t) = b v^4` has `Q_p`-points by
//! lifting primitive residue classes level by level.

use serde::{Deserialize, Serialize};

use crate::arith::{pow_mod, reduce, valuation, ResidueTable};

/// Largest modulus the residue scans will touch.
pub const MAX_MODULUS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagTerm {
    pub name: String,
    /// Coefficient in the equation `sum coef * x^exponent = 0`.
    #[serde(with = "crate::wide")]
    pub coef: i128,
    pub exponent: u32,
    /// The coprimality conditions talk about `member * x` rather than `x`.
    pub member: u64,
}

/// `sum coef_i x_i^{e_i} = 0` with `gcd(member_i x_i, member_j x_j) = 1` for
/// each listed pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalForm {
    pub terms: Vec<DiagTerm>,
    pub pairs: Vec<(usize, usize)>,
    /// `(q, terms)`: the prime `q` divides `member_i x_i` for some listed `i`.
    #[serde(default)]
    pub divisible: Vec<(u64, Vec<usize>)>,
}

impl DiagonalForm {
    /// `a^2 u^8 + b^2 v^8 - c w^4 = 0` with conditions on `au`, `bv`, `cw`.
    pub fn octal(a: u64, b: u64, c: u64) -> Self {
        DiagonalForm {
            terms: vec![
                term("u", (a as i128).pow(2), 8, a),
                term("v", (b as i128).pow(2), 8, b),
                term("w", -(c as i128), 4, c),
            ],
            pairs: vec![(0, 1), (0, 2), (1, 2)],
            divisible: Vec::new(),
        }
    }

    /// `d^2 U^8 - e^2 V^8 - B v^4 = 0` with conditions on `dU`, `eV`, `Bv`,
    /// and `2 | dU eV` since `m = dU^4`, `n = eV^4` have opposite parity.
    pub fn derived(d: u64, e: u64, b: u64) -> Self {
        DiagonalForm {
            terms: vec![
                term("U", (d as i128).pow(2), 8, d),
                term("V", -(e as i128).pow(2), 8, e),
                term("v", -(b as i128), 4, b),
            ],
            pairs: vec![(0, 1), (0, 2), (1, 2)],
            divisible: vec![(2, vec![0, 1])],
        }
    }

    /// Residue patterns (bit i set = term i divisible by p) allowed by the conditions.
    fn allowed_patterns(&self, p: u64) -> Vec<u32> {
        (0u32..1 << self.terms.len())
            .filter(|mask| {
                self.pairs
                    .iter()
                    .all(|&(i, j)| !(mask >> i & 1 == 1 && mask >> j & 1 == 1))
            })
            .filter(|mask| {
                self.divisible
                    .iter()
                    .filter(|(q, _)| *q == p)
                    .all(|(_, idx)| idx.iter().any(|&i| mask >> i & 1 == 1))
            })
            .collect()
    }
}

fn term(name: &str, coef: i128, exponent: u32, member: u64) -> DiagTerm {
    DiagTerm {
        name: name.to_string(),
        coef,
        exponent,
        member,
    }
}

/// Every solution modulo `p^k` breaks one of the coprimality pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalObstruction {
    pub p: u64,
    pub k: u32,
}

impl LocalObstruction {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// Values `coef * x^e mod m`, split by whether `member * x` is divisible by p.
struct TermValues {
    unit: Vec<u64>,
    divisible: Vec<u64>,
}

fn term_values(t: &DiagTerm, p: u64, m: u64) -> TermValues {
    let c = reduce(t.coef, m);
    let mut unit = vec![false; m as usize];
    let mut divisible = vec![false; m as usize];
    for x in 0..m {
        let v = ((c as u128 * pow_mod(x, t.exponent as u64, m) as u128) % m as u128) as usize;
        if t.member % p == 0 || x % p == 0 {
            divisible[v] = true;
        } else {
            unit[v] = true;
        }
    }
    let collect = |bits: Vec<bool>| {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect()
    };
    TermValues {
        unit: collect(unit),
        divisible: collect(divisible),
    }
}

/// Does some admissible residue tuple modulo `p^k` solve the form?
fn admissible_solution_exists(form: &DiagonalForm, p: u64, m: u64) -> bool {
    let values: Vec<TermValues> = form.terms.iter().map(|t| term_values(t, p, m)).collect();
    let pick = |i: usize, mask: u32| -> &Vec<u64> {
        if mask >> i & 1 == 1 {
            &values[i].divisible
        } else {
            &values[i].unit
        }
    };
    for mask in form.allowed_patterns(p) {
        let sets: Vec<&Vec<u64>> = (0..form.terms.len()).map(|i| pick(i, mask)).collect();
        if sets.iter().any(|s| s.is_empty()) {
            continue;
        }
        // Fold every set but the last into a sumset, then look up the negation.
        let mut reach = vec![false; m as usize];
        for &v in sets[0] {
            reach[v as usize] = true;
        }
        for set in &sets[1..sets.len() - 1] {
            let mut next = vec![false; m as usize];
            for (r, _) in reach.iter().enumerate().filter(|(_, &b)| b) {
                for &v in set.iter() {
                    next[((r as u64 + v) % m) as usize] = true;
                }
            }
            reach = next;
        }
        let mut last = vec![false; m as usize];
        for &v in sets[sets.len() - 1].iter() {
            last[v as usize] = true;
        }
        let hit = reach
            .iter()
            .enumerate()
            .any(|(r, &b)| b && last[((m - r as u64) % m) as usize]);
        if hit {
            return true;
        }
    }
    false
}

/// Smallest `k <= k_max` at which every solution modulo `p^k` violates a
/// coprimality pair.
pub fn obstruct_mod_prime_power(form: &DiagonalForm, p: u64, k_max: u32) -> Option<LocalObstruction> {
    let mut m = 1u64;
    for k in 1..=k_max {
        m = m.checked_mul(p)?;
        if m > MAX_MODULUS {
            return None;
        }
        if !admissible_solution_exists(form, p, m) {
            return Some(LocalObstruction { p, k });
        }
    }
    None
}

/// Binary quartic form with coefficients of `s^4, s^3 t, s^2 t^2, s t^3, t^4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryQuartic(pub [i64; 5]);

impl BinaryQuartic {
    pub fn eval(&self, s: i128, t: i128) -> i128 {
        let c = self.0;
        let (s2, t2) = (s * s, t * t);
        c[0] as i128 * s2 * s2
            + c[1] as i128 * s2 * s * t
            + c[2] as i128 * s2 * t2
            + c[3] as i128 * s * t2 * t
            + c[4] as i128 * t2 * t2
    }

    pub fn ds(&self, s: i128, t: i128) -> i128 {
        let c = self.0;
        4 * c[0] as i128 * s * s * s
            + 3 * c[1] as i128 * s * s * t
            + 2 * c[2] as i128 * s * t * t
            + c[3] as i128 * t * t * t
    }

    pub fn dt(&self, s: i128, t: i128) -> i128 {
        let c = self.0;
        c[1] as i128 * s * s * s
            + 2 * c[2] as i128 * s * s * t
            + 3 * c[3] as i128 * s * t * t
            + 4 * c[4] as i128 * t * t * t
    }

    pub fn neg(&self) -> BinaryQuartic {
        BinaryQuartic(self.0.map(|x| -x))
    }
}

/// Unit conditions at the prime under test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitConstraints {
    /// `s` and `t` are not both divisible by p.
    pub st_primitive: bool,
    pub u_unit: bool,
    pub v_unit: bool,
}

impl UnitConstraints {
    pub fn is_bare(&self) -> bool {
        !self.st_primitive && !self.u_unit && !self.v_unit
    }
}

/// `F(s,t) = a u^4`, `G(s,t) = b v^4` in projective 3-space over
/// `(s, t, u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuarticSystem {
    pub f: BinaryQuartic,
    pub g: BinaryQuartic,
    pub a: i64,
    pub b: i64,
    #[serde(default)]
    pub constraints: UnitConstraints,
}

impl QuarticSystem {
    pub fn bare(f: BinaryQuartic, g: BinaryQuartic, a: i64, b: i64) -> Self {
        QuarticSystem {
            f,
            g,
            a,
            b,
            constraints: UnitConstraints::default(),
        }
    }

    pub fn with_constraints(mut self, constraints: UnitConstraints) -> Self {
        self.constraints = constraints;
        self
    }

    /// The two residuals `F - a u^4` and `G - b v^4`.
    pub fn residuals(&self, x: [i128; 4]) -> (i128, i128) {
        let [s, t, u, v] = x;
        (
            self.f.eval(s, t) - self.a as i128 * u.pow(4),
            self.g.eval(s, t) - self.b as i128 * v.pow(4),
        )
    }

    /// Does the residue tuple respect the unit constraints modulo `p`?
    pub fn admits(&self, x: [u64; 4], p: u64) -> bool {
        let c = self.constraints;
        !(c.st_primitive && x[0] % p == 0 && x[1] % p == 0
            || c.u_unit && x[2] % p == 0
            || c.v_unit && x[3] % p == 0)
    }

    fn charts(&self) -> Vec<usize> {
        let c = self.constraints;
        (0..4)
            .filter(|&j| !(c.st_primitive && j >= 2) && !(c.u_unit && j >= 3))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum LocalVerdict {
    /// No primitive class survives at this level.
    Insoluble { level: u32 },
    /// A residue point from which Hensel's lemma produces a `Q_p`-point.
    Soluble { point: [i128; 4], level: u32 },
    Unknown,
}

/// Default lifting depth: 12 levels at 2, 6 at odd primes.
pub fn default_depth(p: u64) -> u32 {
    if p == 2 {
        12
    } else {
        6
    }
}

const SURVIVOR_CAP: usize = 1 << 20;

/// A primitive class modulo `p^k`, normalized so the first coordinate not
/// divisible by `p` equals 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Class {
    pub chart: usize,
    pub x: [u64; 4],
}

fn satisfies(sys: &QuarticSystem, x: [u64; 4], m: u64) -> bool {
    let xi = x.map(|v| v as i128);
    let (r1, r2) = sys.residuals(xi);
    r1.rem_euclid(m as i128) == 0 && r2.rem_euclid(m as i128) == 0
}

/// All primitive classes modulo `p` in the given charts that solve the system.
fn level_one(sys: &QuarticSystem, p: u64, charts: &[usize]) -> Vec<Class> {
    let mut out = Vec::new();
    for &j in charts {
        let free: Vec<usize> = ((j + 1)..4).collect();
        let count = p.pow(free.len() as u32);
        for code in 0..count {
            let mut x = [0u64; 4];
            x[j] = 1;
            let mut rest = code;
            for &i in &free {
                x[i] = rest % p;
                rest /= p;
            }
            if sys.admits(x, p) && satisfies(sys, x, p) {
                out.push(Class { chart: j, x });
            }
        }
    }
    out
}

/// Children of a class modulo `p^k` that still solve modulo `p^{k+1}`.
fn lift(sys: &QuarticSystem, p: u64, pk: u64, class: &Class, out: &mut Vec<Class>) {
    let next = pk * p;
    let free: Vec<usize> = (0..4).filter(|&i| i != class.chart).collect();
    for code in 0..p * p * p {
        let mut x = class.x;
        let mut rest = code;
        for &i in &free {
            x[i] += (rest % p) * pk;
            rest /= p;
        }
        if satisfies(sys, x, next) {
            out.push(Class { chart: class.chart, x });
        }
    }
}

fn val_or_inf(x: i128, p: u64) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        valuation(x, p)
    }
}

/// Hensel test at an integer point: residual valuations exceed twice the
/// smallest valuation of a 2x2 minor of the Jacobian.
pub fn hensel_lifts(sys: &QuarticSystem, x: [i128; 4], p: u64) -> bool {
    let [s, t, u, v] = x;
    let (r1, r2) = sys.residuals(x);
    if r1 == 0 && r2 == 0 {
        return true;
    }
    let row1 = [sys.f.ds(s, t), sys.f.dt(s, t), -4 * sys.a as i128 * u.pow(3), 0];
    let row2 = [sys.g.ds(s, t), sys.g.dt(s, t), 0, -4 * sys.b as i128 * v.pow(3)];
    let mut best = u32::MAX;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let Some(m) = row1[i]
                .checked_mul(row2[j])
                .and_then(|l| row2[i].checked_mul(row1[j]).and_then(|r| l.checked_sub(r)))
            else {
                continue;
            };
            if m != 0 {
                best = best.min(valuation(m, p));
            }
        }
    }
    if best == u32::MAX {
        return false;
    }
    let fv = val_or_inf(r1, p).min(val_or_inf(r2, p));
    fv > 2 * best
}

/// Decide `Q_p`-solubility of the scheme by lifting primitive classes.
///
/// `Insoluble` is a proof: no primitive class honoring the unit constraints
/// survives at that level. `Soluble` carries a Hensel-liftable point.
pub fn scheme_local_solubility(sys: &QuarticSystem, p: u64, depth: u32) -> LocalVerdict {
    let charts = sys.charts();
    let mut layer = level_one(sys, p, &charts);
    let mut pk = p;
    for level in 1..=depth {
        if layer.is_empty() {
            return LocalVerdict::Insoluble { level };
        }
        for class in &layer {
            let x = class.x.map(|v| v as i128);
            if hensel_lifts(sys, x, p) {
                return LocalVerdict::Soluble { point: x, level };
            }
        }
        if level == depth || layer.len() > SURVIVOR_CAP {
            break;
        }
        let mut next = Vec::new();
        for class in &layer {
            lift(sys, p, pk, class, &mut next);
        }
        layer = next;
        pk *= p;
    }
    LocalVerdict::Unknown
}

/// Survivors modulo `p^k` in the given charts (all solutions at that level).
pub fn survivors(sys: &QuarticSystem, p: u64, k: u32, charts: &[usize]) -> Vec<Class> {
    let mut layer = level_one(sys, p, charts);
    let mut pk = p;
    for _ in 1..k {
        let mut next = Vec::new();
        for class in &layer {
            lift(sys, p, pk, class, &mut next);
        }
        layer = next;
        pk *= p;
    }
    layer
}

/// Number of level-one classes that still have a descendant at level `k`.
pub fn surviving_roots(sys: &QuarticSystem, p: u64, k: u32) -> usize {
    let charts = sys.charts();
    let mut roots: Vec<Class> = survivors(sys, p, k, &charts)
        .into_iter()
        .map(|c| Class {
            chart: c.chart,
            x: c.x.map(|v| v % p),
        })
        .collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

/// `(s, t)` classes modulo `p^k` (with `s = 1`, or `p | s` and `t = 1`) for
/// which `F(s,t)` and `G(s,t)` lie in the residue tables of `a u^4`, `b v^4`.
pub fn st_projection_fast(sys: &QuarticSystem, p: u64, k: u32) -> Vec<(u64, u64)> {
    let m = p.pow(k);
    let c = sys.constraints;
    let ta = ResidueTable::scaled(m, 4, sys.a as i128, c.u_unit);
    let tb = ResidueTable::scaled(m, 4, sys.b as i128, c.v_unit);
    let mut out = Vec::new();
    let mut test = |s: u64, t: u64| {
        let (fs, gs) = (sys.f.eval(s as i128, t as i128), sys.g.eval(s as i128, t as i128));
        if ta.contains(reduce(fs, m)) && tb.contains(reduce(gs, m)) {
            out.push((s, t));
        }
    };
    for t in 0..m {
        test(1, t);
    }
    for s in (0..m).step_by(p as usize) {
        test(s, 1);
    }
    out.sort_unstable();
    out
}

/// The same projection computed from the level-by-level survivors.
pub fn st_projection_naive(sys: &QuarticSystem, p: u64, k: u32) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = survivors(sys, p, k, &[0, 1])
        .into_iter()
        .map(|c| (c.x[0], c.x[1]))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Brute force over every tuple modulo `p^k`: is there a primitive solution
/// honoring the unit constraints?
pub fn exhaustive_has_primitive_solution(sys: &QuarticSystem, p: u64, k: u32) -> bool {
    let m = p.pow(k);
    for s in 0..m {
        for t in 0..m {
            for u in 0..m {
                for v in 0..m {
                    let x = [s, t, u, v];
                    if x.iter().all(|&c| c % p == 0) || !sys.admits(x, p) {
                        continue;
                    }
                    if satisfies(sys, x, m) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: [i64; 5]) -> BinaryQuartic {
        BinaryQuartic(c)
    }

    #[test]
    fn octal_obstructions_for_31() {
        let f = DiagonalForm::octal(1, 1, 62);
        assert_eq!(obstruct_mod_prime_power(&f, 2, 3), Some(LocalObstruction { p: 2, k: 3 }));
        assert_eq!(obstruct_mod_prime_power(&f, 2, 2), None);
        let f = DiagonalForm::octal(2, 1, 31);
        assert_eq!(obstruct_mod_prime_power(&f, 2, 2), Some(LocalObstruction { p: 2, k: 2 }));
        let f = DiagonalForm::derived(3, 1, 295);
        assert_eq!(obstruct_mod_prime_power(&f, 3, 1), Some(LocalObstruction { p: 3, k: 1 }));
    }

    #[test]
    fn soluble_equation_has_no_obstruction() {
        // 1 + 1 = 2: (u, v, w) = (1, 1, 1).
        let f = DiagonalForm::octal(1, 1, 2);
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(obstruct_mod_prime_power(&f, p, 3), None, "p = {p}");
        }
    }

    #[test]
    fn system_463_cases() {
        let f1 = q([1, -4, -6, 4, 1]);
        let g1 = q([1, 4, -6, -4, 1]);
        let sys1 = QuarticSystem::bare(f1, g1, 463, 1);
        assert!(matches!(scheme_local_solubility(&sys1, 2, 12), LocalVerdict::Insoluble { .. }));
        let sys2 = QuarticSystem::bare(g1.neg(), f1, 463, 1);
        assert!(matches!(scheme_local_solubility(&sys2, 3, 6), LocalVerdict::Insoluble { .. }));
    }

    #[test]
    fn diagonal_system_is_soluble() {
        let sys = QuarticSystem::bare(q([1, 0, 0, 0, 0]), q([0, 0, 0, 0, 1]), 1, 1);
        match scheme_local_solubility(&sys, 5, 6) {
            LocalVerdict::Soluble { point, .. } => {
                let (r1, r2) = sys.residuals(point);
                assert_eq!(r1.rem_euclid(5), 0);
                assert_eq!(r2.rem_euclid(5), 0);
            }
            v => panic!("expected soluble, got {v:?}"),
        }
    }

    #[test]
    fn fast_projection_matches_naive() {
        let sys = QuarticSystem::bare(q([1, -4, -6, 4, 1]), q([1, 4, -6, -4, 1]), 463, 1);
        for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)] {
            assert_eq!(st_projection_fast(&sys, p, k), st_projection_naive(&sys, p, k));
        }
    }
}
