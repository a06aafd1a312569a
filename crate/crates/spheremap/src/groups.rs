//! Diagonal cyclic subgroups of the unitary group and their classification.
//!
//! A [`DiagonalCyclicGroup`] of order `p` with weights `(a_1, ..., a_n)` is
//! the subgroup generated by `diag(w^a_1, ..., w^a_n)` for `w` a primitive
//! p-th root of unity. The action is fixed-point free exactly when every
//! weight is coprime to `p`. The admissible groups, the ones admitting
//! non-constant invariant sphere maps, fall into three families up to
//! relabeling: all weights equal, weights 1 and 2 with `p` odd, and weights
//! 1, 2, 4 with `p = 7`. Relabeling means a simultaneous permutation of
//! coordinates together with replacing the generator by another primitive
//! power, i.e. multiplying the weight vector by a unit modulo `p`.

use num_integer::gcd;
use serde_json::{json, Value};
use thiserror::Error;

use crate::poly::{MultiIndex, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive, got {0}")]
    InvalidOrder(i64),
    #[error("weight vector must be nonempty")]
    EmptyWeights,
    #[error("group action is not fixed-point free")]
    NotFixedPointFree,
    #[error("dimension mismatch: group acts on {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `<diag(w^a_1, ..., w^a_n)>` for `w` a primitive p-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagonalCyclicGroup {
    p: u32,
    weights: Vec<u32>,
    fixed_point_free: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdmissibilityTag {
    Trivial,
    FullScalar,
    TwoBlock,
    SevenBlock,
    NotAdmissible,
}

impl AdmissibilityTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdmissibilityTag::Trivial => "Trivial",
            AdmissibilityTag::FullScalar => "FullScalar",
            AdmissibilityTag::TwoBlock => "TwoBlock",
            AdmissibilityTag::SevenBlock => "SevenBlock",
            AdmissibilityTag::NotAdmissible => "NotAdmissible",
        }
    }
}

/// Classification outcome together with a witness weight vector in the
/// family's standard sorted form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityClass {
    pub tag: AdmissibilityTag,
    pub normalized_weights: Vec<u32>,
}

impl DiagonalCyclicGroup {
    /// Build a group, reducing weights modulo `p` and computing the
    /// fixed-point-free flag. Groups that are not fixed-point free are
    /// representable; operations that require the property reject them.
    pub fn new(p: i64, weights: &[i64]) -> Result<Self, GroupError> {
        if p <= 0 {
            return Err(GroupError::InvalidOrder(p));
        }
        if weights.is_empty() {
            return Err(GroupError::EmptyWeights);
        }
        let p = p as u32;
        let reduced: Vec<u32> = weights
            .iter()
            .map(|&w| w.rem_euclid(p as i64) as u32)
            .collect();
        // No non-identity power may have eigenvalue 1: k * a_j != 0 mod p for
        // all k in 1..p, equivalently gcd(a_j, p) = 1 for every j.
        let fixed_point_free = reduced.iter().all(|&a| gcd(a, p) == 1);
        Ok(DiagonalCyclicGroup {
            p,
            weights: reduced,
            fixed_point_free,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_point_free
    }

    pub fn is_trivial(&self) -> bool {
        self.p == 1
    }

    /// Units modulo `p`, ascending.
    fn units(&self) -> Vec<u32> {
        (1..=self.p).filter(|&u| gcd(u, self.p) == 1).collect()
    }

    /// Classify against the admissible families. Equivalence is tested by
    /// enumerating every unit multiple of the weight vector and sorting,
    /// which covers all coordinate permutations.
    pub fn classify(&self) -> Result<AdmissibilityClass, GroupError> {
        if !self.fixed_point_free {
            return Err(GroupError::NotFixedPointFree);
        }
        let n = self.dimension();
        if self.p == 1 {
            return Ok(AdmissibilityClass {
                tag: AdmissibilityTag::Trivial,
                normalized_weights: vec![0; n],
            });
        }
        let orbit: Vec<Vec<u32>> = self
            .units()
            .iter()
            .map(|&u| {
                let mut v: Vec<u32> = self
                    .weights
                    .iter()
                    .map(|&a| ((a as u64 * u as u64) % self.p as u64) as u32)
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();

        if orbit.iter().any(|v| v.iter().all(|&a| a == 1)) {
            return Ok(AdmissibilityClass {
                tag: AdmissibilityTag::FullScalar,
                normalized_weights: vec![1; n],
            });
        }
        if self.p % 2 == 1 {
            // Several units can match (for p = 3 multiplying by 2 swaps the
            // values 1 and 2), so take the smallest matching witness.
            if let Some(v) = orbit
                .iter()
                .filter(|v| v.iter().all(|&a| a == 1 || a == 2) && v.contains(&1) && v.contains(&2))
                .min()
            {
                return Ok(AdmissibilityClass {
                    tag: AdmissibilityTag::TwoBlock,
                    normalized_weights: v.clone(),
                });
            }
        }
        if self.p == 7 {
            if let Some(v) = orbit
                .iter()
                .filter(|v| v.iter().all(|&a| a == 1 || a == 2 || a == 4))
                .min()
            {
                return Ok(AdmissibilityClass {
                    tag: AdmissibilityTag::SevenBlock,
                    normalized_weights: v.clone(),
                });
            }
        }
        let canonical = orbit.into_iter().min().expect("orbit is nonempty");
        Ok(AdmissibilityClass {
            tag: AdmissibilityTag::NotAdmissible,
            normalized_weights: canonical,
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.classify()
            .map(|c| c.tag != AdmissibilityTag::NotAdmissible)
            .unwrap_or(false)
    }

    /// A monomial `x^alpha` is invariant under the diagonal action exactly
    /// when `sum_j a_j alpha_j = 0 mod p`.
    pub fn is_invariant_monomial(&self, alpha: &MultiIndex) -> Result<bool, GroupError> {
        if alpha.len() != self.dimension() {
            return Err(GroupError::DimensionMismatch {
                expected: self.dimension(),
                found: alpha.len(),
            });
        }
        let sum: u64 = self
            .weights
            .iter()
            .zip(alpha.exponents())
            .map(|(&a, &e)| (a as u64 % self.p as u64) * (e as u64 % self.p as u64) % self.p as u64)
            .sum();
        Ok(sum.is_multiple_of(self.p as u64))
    }

    /// A polynomial is invariant when every stored monomial is.
    pub fn is_invariant(&self, poly: &Polynomial) -> Result<bool, GroupError> {
        if poly.num_vars() != self.dimension() {
            return Err(GroupError::DimensionMismatch {
                expected: self.dimension(),
                found: poly.num_vars(),
            });
        }
        for (mi, _) in poly.terms() {
            if !self.is_invariant_monomial(mi)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        json!({ "p": self.p, "weights": self.weights })
    }

    pub fn from_json(v: &Value) -> Result<Self, GroupError> {
        let p = v
            .get("p")
            .and_then(Value::as_i64)
            .ok_or(GroupError::InvalidOrder(0))?;
        let weights: Vec<i64> = v
            .get("weights")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_i64).collect())
            .unwrap_or_default();
        DiagonalCyclicGroup::new(p, &weights)
    }
}

impl std::fmt::Display for DiagonalCyclicGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "Gamma(p={}; {})", self.p, ws.join(","))
    }
}
