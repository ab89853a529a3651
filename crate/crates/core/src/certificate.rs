//! Certificates: the JSON record of why `n` is or is not a difference of two
//! rational fourth powers.
//!
//! A certificate holds the fourth-power reduction `n = k^4 m` and then one of
//! three proofs: a witness, an easy curve of rank zero, or one eliminating
//! step per octal equation of `m`. A triple without a step leaves the
//! certificate undecided.

use serde::{Deserialize, Serialize};

use crate::arith::PowerFreeDecomp;
use crate::descent::{MordellStep, OctalEquation};
use crate::elliptic::Rank0Step;
use crate::gaussian::GaussianStep;
use crate::local::LocalObstruction;
use crate::pythag::PythagStep;
use crate::sieve::{GeneratorTable, SieveStep};
use crate::witness::Witness;

/// Search bounds and caps; recorded in every certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Witness search box `x, y, z <= height`.
    pub height: u64,
    /// Primes tried for local obstructions of the octal equations.
    pub local_prime_cap: u64,
    /// Largest modulus `p^k` used for those obstructions.
    pub local_modulus_cap: u64,
    /// Lifting depth for quartic systems; `None` uses the per-prime default.
    pub padic_depth: Option<u32>,
    /// Torsor point search bound on `M` and `e`.
    pub point_search: i64,
    /// Sieve primes are `< sieve_prime_cap`.
    pub sieve_prime_cap: u64,
    /// Moduli for the Pythagorean derived equations are `<= pythag_prime_cap`.
    pub pythag_prime_cap: u64,
    pub gaussian_primes: Vec<u64>,
    /// External generators; only their use is recorded, in the sieve steps.
    #[serde(skip)]
    pub generators: GeneratorTable,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            height: 250,
            local_prime_cap: 13,
            local_modulus_cap: 256,
            padic_depth: None,
            point_search: 316,
            sieve_prime_cap: 229,
            pythag_prime_cap: 229,
            gaussian_primes: vec![2, 3, 5, 7, 11, 13, 17],
            generators: GeneratorTable::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Representable,
    NotRepresentable,
    Undecided,
}

/// How one octal equation is ruled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Step {
    MordellForm(MordellStep),
    LocalObstruction(LocalObstruction),
    HardCurveRank0(Rank0Step),
    MwSieve(SieveStep),
    PythagDescent(PythagStep),
    GaussianCaseSplit(GaussianStep),
}

impl Step {
    pub fn tag(&self) -> &'static str {
        match self {
            Step::MordellForm(_) => "mordell-form",
            Step::LocalObstruction(_) => "local-obstruction",
            Step::HardCurveRank0(_) => "hard-curve-rank0",
            Step::MwSieve(_) => "mw-sieve",
            Step::PythagDescent(_) => "pythag-descent",
            Step::GaussianCaseSplit(_) => "gaussian-case-split",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleProof {
    pub equation: OctalEquation,
    pub step: Option<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Proof {
    /// A primitive solution for `n` itself.
    Witness { witness: Witness },
    /// One of the three curves attached to `m` has rank zero and no usable torsion.
    EasyCurveRank0 { step: Rank0Step },
    /// Every octal equation of `m`, each with its eliminating step if any.
    Triples { triples: Vec<TripleProof> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u64,
    pub verdict: Verdict,
    pub reduction: PowerFreeDecomp,
    pub proof: Proof,
    pub config: Config,
}

impl Certificate {
    /// Octal equations left without an eliminating step.
    pub fn uncovered(&self) -> Vec<OctalEquation> {
        match &self.proof {
            Proof::Triples { triples } => triples
                .iter()
                .filter(|t| t.step.is_none())
                .map(|t| t.equation.clone())
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Does any step depend on an unproven generator set?
    pub fn is_conditional(&self) -> bool {
        match &self.proof {
            Proof::Triples { triples } => triples
                .iter()
                .any(|t| matches!(&t.step, Some(Step::MwSieve(s)) if s.conditional)),
            _ => false,
        }
    }

    /// Short status in the style of a batch log.
    pub fn status_label(&self) -> String {
        let prefix = if self.reduction.k > 1 {
            format!("factor 4th power ({}^4 * {}); ", self.reduction.k, self.reduction.n_prime)
        } else {
            String::new()
        };
        let body = match &self.proof {
            Proof::Witness { witness } => format!("solution ({}, {}, {})", witness.x, witness.y, witness.z),
            Proof::EasyCurveRank0 { .. } => "excluded at easy curves".to_string(),
            Proof::Triples { triples } => {
                let uncovered = self.uncovered();
                if !uncovered.is_empty() {
                    let eqs: Vec<String> = uncovered
                        .iter()
                        .map(|e| format!("{}u^8+{}v^8={}w^4", e.a * e.a, e.b * e.b, e.c))
                        .collect();
                    format!("undecided: {}", eqs.join(", "))
                } else if triples
                    .iter()
                    .any(|t| matches!(t.step, Some(Step::MordellForm(_))))
                {
                    "Exclude by Mordell's Theorem".to_string()
                } else {
                    "[]".to_string()
                }
            }
        };
        format!("{prefix}{body}")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Certificate> {
        serde_json::from_str(text)
    }
}
