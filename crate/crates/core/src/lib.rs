//! Exact computer algebra for the twisted Heisenberg-Virasoro algebra at level zero.
//!
//! The algebra, derivation and 2-local machinery is generic over a [`Scalar`];
//! the aliases below fix the exact rational field used by the CLI and reports.

pub mod algebra;
pub mod derivation;
pub mod expr;
pub mod formats;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod two_local;

pub use algebra::{bracket, center_project, jacobi_check, Basis, CocycleSign};
pub use derivation::{OuterKind, ParamSlot};
pub use expr::{parse_element, ParseError};
pub use scalar::{checked_div, checked_inv, Scalar, ScalarError};

/// Exact rational coefficient in lowest terms with positive denominator.
pub type Coefficient = num_rational::BigRational;

pub type Element = algebra::Element<Coefficient>;
pub type DerivationParams = derivation::DerivationParams<Coefficient>;
pub type DerivationTable = derivation::DerivationTable<Coefficient>;
pub type LinSystem = linalg::LinSystem<Coefficient>;
pub type SolutionSpace = linalg::SolutionSpace<Coefficient>;
pub type TwoLocalAssignment = two_local::TwoLocalAssignment<Coefficient>;
pub type ReductionCertificate = two_local::ReductionCertificate<Coefficient>;

/// Floating-point elements; convenient for quick checks, not exact.
pub type FloatElement = algebra::Element<f64>;
