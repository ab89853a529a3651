//! Elliptic curves `y^2 = x^3 + A x` attached to the problem: maps from
//! solutions, group law over `Q` and `F_p`, torsion, 2-isogeny rank bounds,
//! and rank-zero elimination.

pub mod curve;
pub mod fp;
pub mod isogeny;
pub mod maps;
pub mod rank0;
pub mod torsion;

pub use curve::{Curve, ProjPoint, RatPoint};
pub use fp::{FpCurve, FpPoint};
pub use isogeny::{rank_upper_bound, torsor_locally_soluble, two_isogeny_descent, IsogenyDescent, Place, SelmerSide, TorsorStatus};
pub use maps::{easy_maps, hard_maps, CurveMap, MapImage, MapKind};
pub use rank0::{rank0_eliminate, Rank0Step};
pub use torsion::torsion_subgroup;
