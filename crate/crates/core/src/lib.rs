//! Lines on quartic K3 surfaces over fields of characteristic 2.
//!
//! The crate enumerates lines on a quartic surface over GF(2^k), computes the
//! per-line invariants (degree of the pencil map, ramification, the
//! characteristic-2 resultant, valency, elliptic versus quasi-elliptic
//! fibration, cuspidality), classifies rational double points by explicit
//! blowups, and reproduces the fiber tallies and lattice-rank eliminations
//! behind the bound of 68 lines.

pub mod finite_field;
pub mod polynomial;
pub mod projective;
pub mod line_census;
pub mod line_invariants;
pub mod linalg;
pub mod singularities;
pub mod fixtures;
pub mod combinatorics;
pub mod normalize;
pub mod verify;
