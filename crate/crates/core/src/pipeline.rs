//! The decision procedure for one `n`, and batch runs over ranges.

use std::collections::BTreeMap;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{fourth_power_free, is_kth_power, primes_up_to};
use crate::certificate::{Certificate, Config, Proof, Step, TripleProof, Verdict};
use crate::descent::{mordell_filter, reduce_to_triples, OctalEquation};
use crate::elliptic::maps::{easy_maps, hard_maps};
use crate::elliptic::{rank0_eliminate, torsion_subgroup, two_isogeny_descent, CurveMap, IsogenyDescent, RatPoint};
use crate::gaussian::decide_gaussian;
use crate::local::{obstruct_mod_prime_power, DiagonalForm, LocalObstruction};
use crate::pythag::pythag_eliminate;
use crate::sieve::{find_sieve_prime, GeneratorSource, SieveStep};
use crate::witness::{find_witness, verify_witness, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Representable(Certificate),
    NotRepresentable(Certificate),
    Undecided(Certificate),
}

impl Outcome {
    pub fn certificate(&self) -> &Certificate {
        match self {
            Outcome::Representable(c) | Outcome::NotRepresentable(c) | Outcome::Undecided(c) => c,
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.certificate().verdict
    }
}

/// Largest `k` with `p^k <= cap`.
fn max_exponent(p: u64, cap: u64) -> u32 {
    let mut k = 0;
    let mut m = 1u64;
    while m.saturating_mul(p) <= cap {
        m *= p;
        k += 1;
    }
    k
}

/// Smallest-prime local obstruction of the octal equation.
pub fn octal_obstruction(eq: &OctalEquation, cfg: &Config) -> Option<LocalObstruction> {
    let form = DiagonalForm::octal(eq.a, eq.b, eq.c);
    primes_up_to(cfg.local_prime_cap).into_iter().find_map(|p| {
        let k = max_exponent(p, cfg.local_modulus_cap);
        (k > 0).then(|| obstruct_mod_prime_power(&form, p, k)).flatten()
    })
}

/// Generators for the sieve on one curve, gated on the rank bound.
fn sieve_generators(map: &CurveMap, cfg: &Config) -> Option<(Vec<RatPoint>, GeneratorSource, IsogenyDescent)> {
    let curve = map.curve();
    let descent = two_isogeny_descent(curve.a, Some(cfg.point_search))?;
    let bound = descent.bound;
    let torsion: Vec<RatPoint> = torsion_subgroup(&curve)
        .into_iter()
        .filter(|t| !t.is_infinity())
        .collect();
    if let Some(file) = cfg.generators.get(curve.a) {
        let infinite = file.iter().filter(|g| !torsion.contains(g) && !g.is_infinity()).count();
        if infinite as u32 != bound {
            return None;
        }
        let mut gens = file.to_vec();
        gens.extend(torsion.into_iter().filter(|t| !file.contains(t)));
        return Some((gens, GeneratorSource::File, descent));
    }
    if bound == 0 {
        return Some((torsion, GeneratorSource::Torsion, descent));
    }
    let found = descent.found_points();
    if found.lower_bound != bound {
        return None;
    }
    // A generator and its negative span the same group; keep y < 0.
    let mut gens: Vec<RatPoint> = found
        .generators
        .into_iter()
        .map(|g| match &g {
            RatPoint::Affine(_, y) if y.is_positive() => curve.neg(&g),
            _ => g,
        })
        .collect();
    gens.extend(torsion);
    Some((
        gens,
        GeneratorSource::Search {
            height: cfg.point_search,
        },
        descent,
    ))
}

/// Sieve on the three curves of the equation.
pub fn sieve_triple(eq: &OctalEquation, cfg: &Config) -> Option<SieveStep> {
    hard_maps(eq).iter().find_map(|map| {
        let (gens, source, descent) = sieve_generators(map, cfg)?;
        let step = find_sieve_prime(eq, map, &gens, source, descent.bound, cfg.sieve_prime_cap)?;
        Some(SieveStep {
            descent: Some(descent),
            ..step
        })
    })
}

/// Methods in order of cost; the first that succeeds is recorded.
pub fn eliminate_triple(eq: &OctalEquation, cfg: &Config) -> Option<Step> {
    if let Some(s) = mordell_filter(eq) {
        return Some(Step::MordellForm(s));
    }
    if let Some(o) = octal_obstruction(eq, cfg) {
        return Some(Step::LocalObstruction(o));
    }
    if let Some(s) = rank0_eliminate(&hard_maps(eq)) {
        return Some(Step::HardCurveRank0(s));
    }
    if let Some(s) = pythag_eliminate(eq, cfg.pythag_prime_cap) {
        return Some(Step::PythagDescent(s));
    }
    if let Some(s) = sieve_triple(eq, cfg) {
        return Some(Step::MwSieve(s));
    }
    decide_gaussian(eq, &cfg.gaussian_primes, cfg.padic_depth).map(Step::GaussianCaseSplit)
}

/// Scale a witness for `m` up to `n = k^4 m`.
fn lift_witness(w: Witness, k: u64) -> Witness {
    Witness {
        x: w.x * k,
        y: w.y * k,
        z: w.z,
    }
    .canonical()
}

/// Decide `n`.
pub fn solve(n: u64, cfg: &Config) -> Outcome {
    assert!(n >= 1);
    let reduction = fourth_power_free(n);
    let m = reduction.n_prime;
    let cert = |verdict, proof| Certificate {
        n,
        verdict,
        reduction,
        proof,
        config: cfg.clone(),
    };
    if let Some(w) = find_witness(m, cfg.height) {
        let witness = lift_witness(w, reduction.k);
        debug_assert!(verify_witness(n, &witness));
        return Outcome::Representable(cert(Verdict::Representable, Proof::Witness { witness }));
    }
    if let Some(step) = rank0_eliminate(&easy_maps(m)) {
        return Outcome::NotRepresentable(cert(Verdict::NotRepresentable, Proof::EasyCurveRank0 { step }));
    }
    let triples: Vec<TripleProof> = reduce_to_triples(m)
        .par_iter()
        .map(|eq| TripleProof {
            equation: eq.clone(),
            step: eliminate_triple(eq, cfg),
        })
        .collect();
    let decided = triples.iter().all(|t| t.step.is_some());
    let proof = Proof::Triples { triples };
    if decided {
        Outcome::NotRepresentable(cert(Verdict::NotRepresentable, proof))
    } else {
        Outcome::Undecided(cert(Verdict::Undecided, proof))
    }
}

/// Per-`n` result of a range run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeEntry {
    pub n: u64,
    pub verdict: Verdict,
    pub label: String,
    pub conditional: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeSummary {
    pub entries: Vec<RangeEntry>,
    pub representable: Vec<u64>,
    pub not_representable: Vec<u64>,
    pub undecided: Vec<u64>,
    /// Perfect fourth powers, listed only on request (`x^4 - 0^4 = k^4`).
    pub fourth_powers: Vec<u64>,
    /// Step tags counted over all triples of decided and undecided `n`.
    pub mechanisms: BTreeMap<String, usize>,
}

/// Solve every `n` in `lo..=hi`, in parallel; certificates are returned in order.
pub fn run_range(lo: u64, hi: u64, cfg: &Config, include_fourth_powers: bool) -> (RangeSummary, Vec<Outcome>) {
    assert!(1 <= lo && lo <= hi);
    let outcomes: Vec<Outcome> = (lo..=hi).into_par_iter().map(|n| solve(n, cfg)).collect();
    let mut summary = RangeSummary::default();
    for o in &outcomes {
        let c = o.certificate();
        match c.verdict {
            Verdict::Representable => summary.representable.push(c.n),
            Verdict::NotRepresentable => summary.not_representable.push(c.n),
            Verdict::Undecided => summary.undecided.push(c.n),
        }
        if include_fourth_powers && is_kth_power(c.n as u128, 4).is_some() {
            summary.fourth_powers.push(c.n);
        }
        let tags: Vec<&str> = match &c.proof {
            Proof::Witness { .. } => vec!["witness"],
            Proof::EasyCurveRank0 { .. } => vec!["easy-curve-rank0"],
            Proof::Triples { triples } => triples
                .iter()
                .map(|t| t.step.as_ref().map_or("uncovered", Step::tag))
                .collect(),
        };
        for t in tags {
            *summary.mechanisms.entry(t.to_string()).or_default() += 1;
        }
        summary.entries.push(RangeEntry {
            n: c.n,
            verdict: c.verdict,
            label: c.status_label(),
            conditional: c.is_conditional(),
        });
    }
    (summary, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let cfg = Config::default();
        match solve(5, &cfg) {
            Outcome::Representable(c) => match c.proof {
                Proof::Witness { witness } => assert_eq!((witness.x, witness.y, witness.z), (3, 1, 2)),
                _ => panic!(),
            },
            o => panic!("{o:?}"),
        }
        let one = solve(1, &cfg);
        assert!(matches!(one.certificate().proof, Proof::EasyCurveRank0 { .. }));
        assert_eq!(one.verdict(), Verdict::NotRepresentable);
    }

    #[test]
    fn fourth_power_multiples_inherit() {
        let cfg = Config::default();
        let o = solve(5 * 16, &cfg);
        assert_eq!(o.verdict(), Verdict::Representable);
        assert_eq!(o.certificate().reduction.k, 2);
    }

    #[test]
    fn max_exponents() {
        assert_eq!(max_exponent(2, 256), 8);
        assert_eq!(max_exponent(13, 256), 2);
        assert_eq!(max_exponent(17, 16), 0);
    }
}
