//! Formal linearization of holomorphic germs with a diagonal linear part.

pub mod cyclotomic;
pub mod document;
pub mod error;
pub mod index;
pub mod linearizer;
pub mod majorant;
pub mod polar;
pub mod scalar;
pub mod series;
pub mod spectrum;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use index::MultiIndex;
pub use polar::{ComplexValue, ExactPolar, LogPolar};
pub use scalar::{Mode, Scalar};
pub use series::{coeff_norm, OrdX, SeriesVector, TruncatedSeries};
pub use document::{AnyGerm, GermDocument};
pub use linearizer::{
    check_osculating_form, poincare_dulac, solve_linearization, verify_conjugacy, Germ, LinearizationResult,
    NormalFormResult, Provenance,
};
pub use spectrum::{enumerate_resonances, omega_tables, reduced_omega_table, Spectrum};
