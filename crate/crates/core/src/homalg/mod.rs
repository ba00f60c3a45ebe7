//! Exact homological algebra over the integers, their localizations, the rationals and
//! prime fields.

mod complex;
mod double;
mod field;
mod matrix;
mod ring;
mod smith;
mod spectral;

pub use complex::{
    chain_homotopy_defect, is_quasi_iso, mapping_cone, verify_chain_homotopy, ChainComplex, ChainHomotopy, ChainMap, HomologyPresentation,
    HomologyRow, QuasiIsoReport, Verdict,
};
pub use double::{total_complex, DoubleComplex};
pub use field::{field_kind, kernel, rank, rref, Basis, Field, FieldKind, FieldMatrix, PrimeField, Rationals, Subquotient};
pub use matrix::Matrix;
pub use ring::RingSpec;
pub use smith::{big_fallback_count, determinant, elementary_divisors, local_valuations, smith_normal_form, verified_count, SmithNormalForm};
pub use spectral::{field_dimensions, spectral_sequence, ConvergenceRow, PageDifferential, SpectralSequence, SpectralSequencePage};
