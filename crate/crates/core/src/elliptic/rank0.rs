//! Elimination through curves of rank zero: when the rank bound vanishes,
//! every rational point is torsion, and a torsion point that cannot be the
//! image of a solution with nonzero coordinates rules the equation out.

use serde::{Deserialize, Serialize};

use super::curve::ProjPoint;
use super::isogeny::{two_isogeny_descent, IsogenyDescent};
use super::maps::CurveMap;
use super::torsion::torsion_subgroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank0Step {
    pub map: CurveMap,
    #[serde(with = "crate::wide")]
    pub curve_a: i128,
    pub descent: IsogenyDescent,
    /// The full torsion subgroup; none of these points has a valid preimage.
    pub torsion: Vec<ProjPoint>,
}

/// Try one curve.
pub fn rank0_for_map(map: &CurveMap) -> Option<Rank0Step> {
    let curve = map.curve();
    let descent = two_isogeny_descent(curve.a, None)?;
    if descent.bound != 0 {
        return None;
    }
    let torsion = torsion_subgroup(&curve);
    if torsion.iter().any(|t| map.preimage_possible(t)) {
        return None;
    }
    Some(Rank0Step {
        map: *map,
        curve_a: curve.a,
        descent,
        torsion: torsion.iter().map(|t| t.to_proj()).collect(),
    })
}

/// First curve among `maps` that eliminates its source equation.
pub fn rank0_eliminate(maps: &[CurveMap]) -> Option<Rank0Step> {
    maps.iter().find_map(rank0_for_map)
}
