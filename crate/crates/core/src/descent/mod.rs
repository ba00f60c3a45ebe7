//! Homology functors on finite (G-)sets and descent along hypercovers.

mod apply;
mod axioms;
mod check;
mod functor;

pub use apply::{
    apply_functor, functor_on_morphism, section_contraction, simplicial_to_chain_homotopy, Applied, ChainHomotopyCertificate, SectionContraction,
};
pub use axioms::{verify_blowup_triangle, verify_functoriality, verify_transfer, BlowupTriangleReport, TransferVerdict};
pub use check::{
    descent_check, descent_spectral_sequence, ring_compatible, tower_consistency, DescentReport, DescentSpectralReport, TowerReport, TowerStageReport,
};
pub use functor::{
    free_chains, normalized_chains, orbit_chains, product_chains, simplicial_circle, FreeChains, HomologyFunctor, OrbitChains, ProductChains,
};
