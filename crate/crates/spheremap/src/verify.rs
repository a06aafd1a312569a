//! The three-check verification bundle.
//!
//! A polynomial with non-negative coefficients that is invariant under the
//! group and takes the value 1 on `x_1 + ... + x_n = 1` corresponds to a
//! group-invariant monomial sphere map with `rank` components, landing in
//! `S^(2 rank - 1)`. A failed check is a fact to report, not an error.

use serde_json::{json, Value};

use crate::groups::{DiagonalCyclicGroup, GroupError};
use crate::poly::{Polynomial, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub invariant: bool,
    pub hyperplane: bool,
    pub nonnegative: bool,
    pub rank: usize,
    pub signature: Signature,
    /// `2 rank - 1` when all three checks pass, otherwise absent.
    pub sphere_target: Option<usize>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.invariant && self.hyperplane && self.nonnegative
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariant": self.invariant,
            "hyperplane": self.hyperplane,
            "nonnegative": self.nonnegative,
            "rank": self.rank,
            "signature": [self.signature.n_plus, self.signature.n_minus],
            "sphere_target": self.sphere_target,
        })
    }
}

/// Run the invariance, hyperplane, and non-negativity checks exactly.
pub fn verify_bundle(
    group: &DiagonalCyclicGroup,
    poly: &Polynomial,
) -> Result<VerificationReport, GroupError> {
    let invariant = group.is_invariant(poly)?;
    let hyperplane = poly.satisfies_hyperplane_identity();
    let nonnegative = poly.has_nonnegative_coefficients();
    let (rank, signature) = poly.rank_and_signature();
    let sphere_target = (invariant && hyperplane && nonnegative).then_some(2 * rank - 1);
    Ok(VerificationReport {
        invariant,
        hyperplane,
        nonnegative,
        rank,
        signature,
        sphere_target,
    })
}
