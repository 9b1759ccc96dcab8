//! Shared fixtures for the criterion benches.

use sumset_core::incidence::build_system;
use sumset_core::{
    generate, ConvexFunctionSpec, Family, FamilySpec, FiniteSet, PseudoLineSystem, Rational,
};

pub fn squares(n: usize) -> FiniteSet {
    generate(&FamilySpec::new(Family::Squares, n, 0)).expect("squares")
}

pub fn random_convex(n: usize, seed: u64) -> FiniteSet {
    generate(&FamilySpec::new(Family::RandomConvexGaps, n, seed)).expect("random convex")
}

/// Non-integer points, so the rational backend is exercised.
pub fn geometric(n: usize) -> FiniteSet {
    let ratio = Rational::new(3, 2).expect("nonzero");
    generate(&FamilySpec::new(Family::Gp { ratio }, n, 0)).expect("gp")
}

/// Translates of `x^2` over `Z = {1..n}`, `B = {0..n}`.
pub fn parabola_system(n: i64) -> PseudoLineSystem {
    let z = FiniteSet::from_ints(&(1..=n).collect::<Vec<_>>()).expect("nonempty");
    let b = FiniteSet::from_ints(&(0..n).collect::<Vec<_>>()).expect("nonempty");
    build_system(&ConvexFunctionSpec::Power { p: 2 }, &z, &b).expect("evaluable")
}
