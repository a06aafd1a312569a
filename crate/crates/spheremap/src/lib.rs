//! Group-invariant monomial sphere maps through exact real polynomials.
//!
//! A monomial map between unit spheres corresponds to a real polynomial with
//! non-negative coefficients taking the value 1 on the hyperplane
//! `x_1 + ... + x_n = 1`; invariance under a diagonal cyclic unitary group
//! becomes a weight congruence on the exponents. This crate builds the
//! canonical invariant polynomial of such a group by exact cyclotomic
//! expansion, analyses rank and signature, applies tensoring steps that
//! preserve all three defining properties, constructs witnesses for every
//! admissible target rank, and searches the achievable rank spectrum.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals and
//! the only floating point lives in a cross-validation oracle and display
//! helpers.

pub mod canonical;
pub mod explorer;
pub mod groups;
pub mod poly;
pub mod tensor;
pub mod verify;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use canonical::{
    canonical_float_oracle, canonical_polynomial, closed_form, extract_map, sqrt_display,
    CanonicalError, CanonicalResult, ClosedFormFamily, FloatPolynomial, MapComponent, MapSide,
};
pub use explorer::{
    default_fractions, explore_spectrum, parse_script, replay_script, ExplorerError, ScriptStep,
    SearchConfig, SpectrumReport, StepKind,
};
pub use groups::{AdmissibilityClass, AdmissibilityTag, DiagonalCyclicGroup, GroupError};
pub use poly::{MultiIndex, ParseError, PolyError, Polynomial, Signature};
pub use tensor::{
    construct_thm1, construct_thm2, op_v, op_w, postage_stamp_decompose, tensor_at,
    ConstructionTrace, TensorError, TensorStep,
};
pub use verify::{verify_bundle, VerificationReport};
