//! Regression against the reference tables of solutions and Pythagorean
//! obstructions.

use std::collections::{BTreeMap, BTreeSet};

use quartdiff_core::arith::{is_kth_power, two_monomial_split};
use quartdiff_core::descent::OctalEquation;
use quartdiff_core::fixtures::{pythag_rows, rational_solutions};
use quartdiff_core::pythag::{pythag_eliminate, pythag_systems};
use quartdiff_core::witness::{find_witness, verify_witness};

fn root(v: u64) -> u64 {
    is_kth_power(v as u128, 2).expect("coefficient is a square") as u64
}

/// Largest coordinate in the table: `6649 = (271/30)^4 - (53/30)^4`.
const TABLE_HEIGHT: u64 = 271;

#[test]
fn every_listed_solution_is_found_and_exact() {
    let rows = rational_solutions();
    assert_eq!(rows.len(), 124);
    for row in rows {
        let w = find_witness(row.n, TABLE_HEIGHT).unwrap_or_else(|| panic!("no witness for {}", row.n));
        assert!(verify_witness(row.n, &w), "{}: {w:?}", row.n);
        assert_eq!((w.x, w.y, w.z), (row.x, row.y, row.z), "n = {}", row.n);
    }
}

#[test]
fn height_250_misses_only_6649() {
    let missed: Vec<u64> = rational_solutions()
        .iter()
        .filter(|r| find_witness(r.n, 250).is_none())
        .map(|r| r.n)
        .collect();
    assert_eq!(missed, vec![6649]);
}

#[test]
fn spot_witnesses() {
    for (n, expected) in [(5, (3, 1, 2)), (239, (120, 119, 13)), (9999, (10, 1, 1))] {
        let w = find_witness(n, 250).unwrap();
        assert_eq!((w.x, w.y, w.z), expected);
    }
}

/// Rows grouped by equation: `(n, a, b, c)` to the listed `(d, e, modulus)`.
fn grouped() -> BTreeMap<(u64, u64, u64, u64), BTreeSet<(u64, u64, u64)>> {
    let mut out: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for r in pythag_rows() {
        let (a, b) = (root(r.u_coef), root(r.v_coef));
        out.entry((r.n, a.max(b), a.min(b), r.w_coef))
            .or_default()
            .insert((r.d, r.e, r.modulus));
    }
    out
}

#[test]
fn splits_match_the_table() {
    assert_eq!(pythag_rows().len(), 132);
    for ((n, a, b, c), rows) in grouped() {
        let eq = OctalEquation::from_triple(a, b, c);
        let ours: BTreeSet<(u64, u64)> = pythag_systems(&eq)
            .iter()
            .flat_map(|s| two_monomial_split(s.even_side))
            .collect();
        let listed: BTreeSet<(u64, u64)> = rows.iter().map(|&(d, e, _)| (d, e)).collect();
        assert_eq!(ours, listed, "n = {n}, ({a}, {b}, {c})");
    }
}

#[test]
fn obstructions_match_the_table() {
    for ((n, a, b, c), rows) in grouped() {
        let eq = OctalEquation::from_triple(a, b, c);
        let step = pythag_eliminate(&eq, 229).unwrap_or_else(|| panic!("n = {n} not eliminated"));
        let ours: BTreeSet<(u64, u64, u64)> = step
            .cases
            .iter()
            .map(|c| (c.derived.d, c.derived.e, c.obstruction.p.pow(c.obstruction.k)))
            .collect();
        assert_eq!(ours, rows, "n = {n}, ({a}, {b}, {c})");
    }
}
