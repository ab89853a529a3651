//! Mordell-Weil sieve at a single prime.
//!
//! Reduce the known generators of `E(Q)` modulo `p` and take the subgroup
//! they generate. Reduce every solution of the octal equation modulo `p` and
//! push it through the curve map. If the two sets are disjoint, no rational
//! solution exists, provided the generators really generate `E(Q)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::primes_up_to;
use crate::descent::OctalEquation;
use crate::elliptic::maps::octal_solutions_mod_p;
use crate::elliptic::{Curve, CurveMap, FpCurve, FpPoint, IsogenyDescent, MapImage, ProjPoint, RatPoint};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SieveError {
    #[error("bad reduction at p = {0}")]
    BadPrime(u64),
    #[error("generator {0} is not on the curve")]
    OffCurve(usize),
    #[error("generator file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Generators keyed by the curve coefficient `A`.
///
/// Text format: one curve per line, `A X1 Y1 Z1 X2 Y2 Z2 ...`, each triple a
/// projective point on `Y^2 Z = X^3 + A X Z^2`. Blank lines and lines
/// starting with `#` are ignored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorTable {
    pub curves: BTreeMap<i128, Vec<RatPoint>>,
}

impl GeneratorTable {
    pub fn parse(text: &str) -> Result<Self, SieveError> {
        let mut curves = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| SieveError::Parse { line: i + 1, reason };
            let fields: Vec<BigInt> = line
                .split_whitespace()
                .map(|w| w.parse::<BigInt>().map_err(|e| err(e.to_string())))
                .collect::<Result<_, _>>()?;
            if fields.len() % 3 != 1 {
                return Err(err("expected A followed by point triples".into()));
            }
            let a: i128 = (&fields[0]).try_into().map_err(|_| err("A out of range".into()))?;
            if a == 0 {
                return Err(err("A must be nonzero".into()));
            }
            let curve = Curve::short(a);
            let mut points = Vec::new();
            for t in fields[1..].chunks(3) {
                let pt = ProjPoint {
                    x: t[0].clone(),
                    y: t[1].clone(),
                    z: t[2].clone(),
                }
                .to_rat()
                .ok_or_else(|| err("degenerate point".into()))?;
                if !curve.contains(&pt) {
                    return Err(err(format!("point {} is not on the curve", points.len() + 1)));
                }
                points.push(pt);
            }
            curves.insert(a, points);
        }
        Ok(GeneratorTable { curves })
    }

    pub fn get(&self, a: i128) -> Option<&[RatPoint]> {
        self.curves.get(&a).map(Vec::as_slice)
    }
}

/// Generators reduced at a prime, with their orders.
#[derive(Clone, Debug)]
pub struct SieveData {
    pub curve: Curve,
    pub generators: Vec<RatPoint>,
    pub p: u64,
    pub periods: Vec<u64>,
    reduced: FpCurve,
}

impl SieveData {
    pub fn new(curve: Curve, generators: Vec<RatPoint>, p: u64) -> Result<Self, SieveError> {
        let reduced = FpCurve::new(&curve, p).ok_or(SieveError::BadPrime(p))?;
        if let Some(i) = generators.iter().position(|g| !curve.contains(g)) {
            return Err(SieveError::OffCurve(i));
        }
        let periods = generators
            .iter()
            .map(|g| reduced.point_order(&reduced.reduce_point(g)))
            .collect();
        Ok(SieveData {
            curve,
            generators,
            p,
            periods,
            reduced,
        })
    }

    pub fn reduced_curve(&self) -> &FpCurve {
        &self.reduced
    }
}

/// `{ sum k_i P_i mod p : 0 <= k_i < T_i }`.
pub fn subgroup_mod_p(data: &SieveData) -> BTreeSet<FpPoint> {
    let e = &data.reduced;
    let mut group = BTreeSet::from([FpPoint::Infinity]);
    for (g, &period) in data.generators.iter().zip(&data.periods) {
        let g = e.reduce_point(g);
        let mut next = BTreeSet::new();
        for x in &group {
            let mut acc = *x;
            for _ in 0..period {
                next.insert(acc);
                acc = e.add(&acc, &g);
            }
        }
        group = next;
    }
    group
}

/// Images modulo `p` of the nonzero solutions of the octal equation.
pub fn local_images(eq: &OctalEquation, map: &CurveMap, p: u64) -> BTreeSet<FpPoint> {
    octal_solutions_mod_p(eq, p)
        .into_iter()
        .filter_map(|t| match map.image_mod_p(t, p) {
            MapImage::Point(q) => Some(q),
            MapImage::Degenerate => None,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum GeneratorSource {
    /// Torsor point search up to this height, with rank bound met.
    Search { height: i64 },
    /// Supplied by a generator file.
    File,
    /// Rank bound zero: the torsion subgroup is all of `E(Q)`.
    Torsion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveStep {
    pub map: CurveMap,
    #[serde(with = "crate::wide")]
    pub curve_a: i128,
    pub p: u64,
    pub generators: Vec<ProjPoint>,
    pub provenance: GeneratorSource,
    pub rank_bound: u32,
    pub periods: Vec<u64>,
    pub subgroup: Vec<FpPoint>,
    pub images: Vec<FpPoint>,
    /// True unless the generators are provably all of `E(Q)`.
    pub conditional: bool,
    /// The rank bound computation behind `rank_bound`, when available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descent: Option<IsogenyDescent>,
}

/// Sieve at the prime of `data`; a step when the sets are disjoint.
pub fn run_sieve(
    eq: &OctalEquation,
    map: &CurveMap,
    data: &SieveData,
    provenance: GeneratorSource,
    rank_bound: u32,
) -> Option<SieveStep> {
    let p = data.p;
    if (2 * eq.a * eq.b * eq.c) % p == 0 {
        return None;
    }
    let images = local_images(eq, map, p);
    let subgroup = subgroup_mod_p(data);
    if !images.is_disjoint(&subgroup) {
        return None;
    }
    Some(SieveStep {
        map: *map,
        curve_a: data.curve.a,
        p,
        generators: data.generators.iter().map(|g| g.to_proj()).collect(),
        conditional: !matches!(provenance, GeneratorSource::Torsion),
        provenance,
        rank_bound,
        periods: data.periods.clone(),
        subgroup: subgroup.into_iter().collect(),
        images: images.into_iter().collect(),
        descent: None,
    })
}

/// Scan good primes `p < cap` not dividing `2abc`; the smallest working prime wins.
pub fn find_sieve_prime(
    eq: &OctalEquation,
    map: &CurveMap,
    generators: &[RatPoint],
    provenance: GeneratorSource,
    rank_bound: u32,
    cap: u64,
) -> Option<SieveStep> {
    let curve = map.curve();
    primes_up_to(cap.saturating_sub(1))
        .into_iter()
        .filter(|&p| p > 2 && (eq.a * eq.b * eq.c) % p != 0)
        .find_map(|p| {
            let data = SieveData::new(curve, generators.to_vec(), p).ok()?;
            run_sieve(eq, map, &data, provenance.clone(), rank_bound)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::MapKind;

    fn n31() -> (OctalEquation, CurveMap, Vec<RatPoint>) {
        (
            OctalEquation::from_triple(31, 1, 2),
            CurveMap::hard(MapKind::HardI, 31, 1, 2),
            vec![RatPoint::from_ints(98, -1148), RatPoint::from_ints(0, 0)],
        )
    }

    #[test]
    fn subgroup_for_31() {
        let (_, map, gens) = n31();
        let data = SieveData::new(map.curve(), gens, 5).unwrap();
        let g: Vec<FpPoint> = subgroup_mod_p(&data).into_iter().collect();
        assert_eq!(
            g,
            vec![
                FpPoint::Infinity,
                FpPoint::Affine(0, 0),
                FpPoint::Affine(3, 2),
                FpPoint::Affine(3, 3)
            ]
        );
        assert_eq!(data.periods, vec![4, 2]);
    }

    #[test]
    fn trivial_subgroups() {
        let curve = Curve::short(3844);
        let data = SieveData::new(curve, vec![], 5).unwrap();
        assert_eq!(subgroup_mod_p(&data).len(), 1);
        let data = SieveData::new(curve, vec![RatPoint::from_ints(0, 0)], 5).unwrap();
        assert_eq!(subgroup_mod_p(&data).len(), 2);
    }

    #[test]
    fn sieve_for_31() {
        let (eq, map, gens) = n31();
        let step = find_sieve_prime(&eq, &map, &gens, GeneratorSource::File, 1, 229).unwrap();
        assert_eq!(step.p, 5);
        assert_eq!(step.images, vec![FpPoint::Affine(2, 1), FpPoint::Affine(2, 4)]);
        assert!(step.conditional);
        let data = SieveData::new(map.curve(), gens, 3).unwrap();
        assert!(run_sieve(&eq, &map, &data, GeneratorSource::File, 1).is_none());
    }

    #[test]
    fn generator_file() {
        let text = "# curve for n = 31\n3844 98 -1148 1  0 0 1\n\n-25 -4 6 1\n";
        let table = GeneratorTable::parse(text).unwrap();
        assert_eq!(table.get(3844).unwrap()[0], RatPoint::from_ints(98, -1148));
        assert_eq!(table.get(-25).unwrap().len(), 1);
        assert!(table.get(5).is_none());
        assert!(matches!(
            GeneratorTable::parse("3844 1 1 1"),
            Err(SieveError::Parse { line: 1, .. })
        ));
        assert!(GeneratorTable::parse("3844 1 1").is_err());
    }

    #[test]
    fn bad_prime_rejected() {
        let (_, map, gens) = n31();
        assert_eq!(
            SieveData::new(map.curve(), gens, 31).unwrap_err(),
            SieveError::BadPrime(31)
        );
    }
}
