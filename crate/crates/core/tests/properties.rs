//! Randomized checks of the algebraic invariants, each with at least 1000 cases.

mod common;

use quartdiff_core::arith::two_monomial_split;

#[test]
fn reduction_is_a_homomorphism() {
    common::reduction_is_a_homomorphism().unwrap();
}

#[test]
fn norm_identity() {
    common::norm_identity().unwrap();
}

#[test]
fn map_images_lie_on_the_curve() {
    common::map_images_lie_on_the_curve().unwrap();
}

#[test]
fn split_covers_random_factorizations() {
    common::split_covers_random_factorizations().unwrap();
}

#[test]
fn scheme_insolubility_matches_brute_force() {
    common::scheme_insolubility_matches_brute_force().unwrap();
}

#[test]
fn split_completeness_exhaustive() {
    let checked = common::split_completeness_exhaustive().unwrap();
    assert!(checked > 100, "only {checked} instances");
}

#[test]
fn hand_checked_split() {
    assert_eq!(two_monomial_split(6), vec![(1, 3), (3, 1)]);
}
