//! Noncommutative phase-space model of a charged particle in a uniform field.

mod field;
mod params;
mod realization;
mod rotated;

pub use field::{effective_field, heisenberg_tensor, nc_bracket_table, EffectiveField, HeisenbergTensor};
pub use params::{ModelParams, NCParameters, Units};
pub use realization::{
    mechanical_momenta, nc_commutator_table, realize, CommutatorEntry, RealizationCoefficients,
};
pub use rotated::{
    guiding_ladder, rotated_canonical, rotated_momenta, BracketCheck, GuidingLadder,
    PlanarCommutators, RotatedCanonical, RotatedMomenta,
};
