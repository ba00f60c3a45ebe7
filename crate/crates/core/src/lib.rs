//! Finite models of hyperdescent.
//!
//! Schemes are replaced by finite G-sets: a point is an orbit and its residue
//! field is the stabilizer of a base point. On top of that model the crate
//! computes coskeleta, Čech nerves and hypercovers exactly, applies
//! chain-valued functors, and decides whether `Tot F(X_•) → F(base)` is a
//! quasi-isomorphism through the truncation window.
//!
//! ```
//! use hyperdescent::descent::{descent_check, orbit_chains};
//! use hyperdescent::fincat::{CoverMode, FinMorphism, FinObject, Group};
//! use hyperdescent::homalg::RingSpec;
//! use hyperdescent::simplicial::cech_nerve;
//! use std::sync::Arc;
//!
//! let g = Arc::new(Group::cyclic(2)?);
//! let free = FinObject::cosets(g.clone(), &[0])?;
//! let quotient = FinMorphism::to_point(&free);
//! let x = cech_nerve(&quotient, 4);
//!
//! let integral = descent_check(&orbit_chains(RingSpec::Integers), &x, CoverMode::Cdh, 4)?;
//! assert_eq!(integral.verdict.failure_degree(), Some(1));
//! let local = descent_check(&orbit_chains(RingSpec::Localized(3)), &x, CoverMode::Ldh(3), 4)?;
//! assert!(local.theorem_applies && local.verdict.is_quasi_iso());
//! # Ok::<(), hyperdescent::Error>(())
//! ```

pub mod cli;
pub mod descent;
pub mod error;
pub mod fincat;
pub mod homalg;
pub mod random;
pub mod simplex;
pub mod simplicial;

pub use error::{Error, Result};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/simplex.md")]
    pub mod simplex {}
    #[doc = include_str!("../../../book/src/gsets.md")]
    pub mod gsets {}
    #[doc = include_str!("../../../book/src/coskeleta.md")]
    pub mod coskeleta {}
    #[doc = include_str!("../../../book/src/hypercovers.md")]
    pub mod hypercovers {}
    #[doc = include_str!("../../../book/src/homology.md")]
    pub mod homology {}
    #[doc = include_str!("../../../book/src/descent.md")]
    pub mod descent {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
