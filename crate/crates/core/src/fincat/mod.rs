//! Computable finite-limit categories: finite sets and finite G-sets.
//!
//! Points of a G-set model the points of a scheme and stabilizers model their
//! residue fields, which turns the cdh and ldh cover conditions into finite
//! checks on stabilizer indices. Every morphism counts as proper.

mod blowup;
mod cover;
mod group;
mod limits;
mod object;

pub use blowup::{validate_blowup_square, BlowupCheck, BlowupSquare};
pub(crate) use cover::is_prime;
pub use cover::{finite_free_degree, is_cover, orbit_data, orbit_index, CoverEntry, CoverMode, CoverReport, Orbit};
pub use group::{Group, MAX_GROUP_ORDER};
pub use limits::{equalizer, factor_through, fiber_product, finite_limit, product, Diagram, DiagramArrow, Limit, Pullback};
pub use object::{Action, FinMorphism, FinObject, GroupContext};
