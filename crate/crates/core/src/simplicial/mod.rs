//! Truncated and augmented simplicial objects of finite (G-)sets.

mod bisimplicial;
mod coskeleton;
mod homotopy;
mod hypercover;
mod nerve;
mod object;

pub use bisimplicial::{bisimplicial_fiber_powers, levelwise_cover_check, Bisimplicial, LevelwiseCover};
pub use coskeleton::{
    coskeleton, coskeleton_bounded, coskeleton_of_morphism, coskeleton_of_morphism_bounded, coskeleton_oracle, coskeleton_unit,
    coskeleton_unit_bounded, is_coskeletal, oracle_agreement, Coskeleton, LevelEncoding,
};
pub use homotopy::{homotopy_from_coskeletal, interval_index, SimplicialHomotopy};
pub use hypercover::{is_hypercover, matching_map, restrict_level, tower, HypercoverReport, LevelCover, Tower, TowerStage};
pub use nerve::{cech_nerve, fiber_power, FiberPower};
pub use object::{AugmentedSimplicialObject, SimplicialCheck, SimplicialMorphism, TruncatedSimplicialObject};
