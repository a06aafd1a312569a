//! Tensoring steps and rank-exact constructions.
//!
//! The basic move replaces a fraction of a term `c x^alpha` of `g` by that
//! fraction times `x^alpha f`, where `f` satisfies the hyperplane identity:
//!
//! ```text
//! g  ->  g - s c x^alpha + s c x^alpha f,        0 < s <= 1.
//! ```
//!
//! Since `x^alpha (f - 1)` vanishes on the hyperplane, the identity is
//! preserved, as are invariance and non-negativity when `g`, `f` and
//! `x^alpha` have them. The two distinguished operators act at the pure
//! top-degree power of `x1`: [`op_v`] moves half the term, [`op_w`] all of
//! it. When the polynomial has total degree `d` and contains `x1^d`, every
//! product term has degree above `d`, so the rank grows by exactly the rank
//! of `f` under `V` and one less under `W`. Chaining the operators and
//! choosing the iteration counts by the two-coin representability bound
//! realizes every sufficiently large rank exactly.

use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde_json::{json, Value};
use thiserror::Error;

use crate::canonical::{canonical_polynomial, CanonicalError};
use crate::groups::{AdmissibilityTag, DiagonalCyclicGroup, GroupError};
use crate::poly::{MultiIndex, PolyError, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error("monomial {0} is not in the support of the polynomial")]
    TargetNotInSupport(MultiIndex),
    #[error("monomial {0} has a non-positive coefficient")]
    TargetNotPositive(MultiIndex),
    #[error("fraction {0} is outside (0, 1]")]
    FractionOutOfRange(BigRational),
    #[error("no pure power of x1 at the total degree {degree}")]
    NoPureTopPower { degree: u32 },
    #[error("denominations must be positive, got {a} and {b}")]
    NonPositiveDenominations { a: u64, b: u64 },
    #[error("denominations {a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("{m} is not representable as j*{a} + k*{b} with non-negative j, k")]
    NotRepresentable { m: i64, a: u64, b: u64 },
    #[error("target rank {requested} is below the minimum {minimum} for this construction")]
    TargetRankTooSmall { requested: usize, minimum: usize },
    #[error("group is not admissible")]
    NotAdmissible,
    #[error("construction requires a two-dimensional group, got dimension {0}")]
    NotTwoDimensional(usize),
    #[error("internal rank bookkeeping failed: {0}")]
    Internal(String),
}

/// One tensoring step: the monomial operated on and the moved fraction.
/// Fraction 1 is a full multiply; fraction 1/2 is a split.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorStep {
    pub target: MultiIndex,
    pub fraction: BigRational,
}

impl TensorStep {
    pub fn multiply(target: MultiIndex) -> Self {
        TensorStep {
            target,
            fraction: BigRational::one(),
        }
    }

    pub fn split(target: MultiIndex) -> Self {
        TensorStep {
            target,
            fraction: BigRational::new(BigInt::one(), BigInt::from(2)),
        }
    }

    pub fn kind_str(&self) -> String {
        if self.fraction.is_one() {
            "mul".into()
        } else if self.fraction == BigRational::new(BigInt::one(), BigInt::from(2)) {
            "split".into()
        } else {
            format!("frac {}", self.fraction)
        }
    }

    pub fn to_json(&self) -> Result<Value, PolyError> {
        let num = self
            .fraction
            .numer()
            .to_i64()
            .ok_or(PolyError::CoefficientTooLarge)?;
        let den = self
            .fraction
            .denom()
            .to_i64()
            .ok_or(PolyError::CoefficientTooLarge)?;
        Ok(json!({
            "target": self.target.exponents(),
            "fraction": [num, den],
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self, PolyError> {
        let target = v
            .get("target")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("step is missing \"target\"".into()))?;
        let exps: Option<Vec<u32>> = target
            .iter()
            .map(|x| x.as_u64().and_then(|v| u32::try_from(v).ok()))
            .collect();
        let exps = exps.ok_or_else(|| PolyError::Json("bad step target".into()))?;
        let fraction = v
            .get("fraction")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("step is missing \"fraction\"".into()))?;
        if fraction.len() != 2 {
            return Err(PolyError::Json("\"fraction\" must be [num, den]".into()));
        }
        let num = fraction[0]
            .as_i64()
            .ok_or_else(|| PolyError::Json("bad fraction".into()))?;
        let den = fraction[1]
            .as_i64()
            .ok_or_else(|| PolyError::Json("bad fraction".into()))?;
        if den == 0 {
            return Err(PolyError::Json("zero fraction denominator".into()));
        }
        Ok(TensorStep {
            target: MultiIndex::new(exps),
            fraction: BigRational::new(BigInt::from(num), BigInt::from(den)),
        })
    }
}

impl std::fmt::Display for TensorStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.kind_str(), self.target)
    }
}

/// An ordered list of tensoring steps from the canonical polynomial of a
/// group, with the resulting polynomial and the rank after each step.
/// Replaying the steps from the canonical polynomial reproduces `result`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub group: DiagonalCyclicGroup,
    pub steps: Vec<TensorStep>,
    pub result: Polynomial,
    pub rank_after_each_step: Vec<usize>,
}

impl ConstructionTrace {
    pub fn final_rank(&self) -> usize {
        self.result.rank()
    }

    /// Recompute the whole chain from the group's canonical polynomial and
    /// check that it reproduces `result` and the recorded ranks.
    pub fn verify_replay(&self) -> Result<(), TensorError> {
        let can = canonical_polynomial(&self.group)?;
        let f = can.f_gamma;
        let mut g = f.clone();
        for (i, step) in self.steps.iter().enumerate() {
            g = tensor_at(&g, &step.target, &step.fraction, &f)?;
            let want = self.rank_after_each_step.get(i).copied();
            if want != Some(g.rank()) {
                return Err(TensorError::Internal(format!(
                    "rank after step {} is {}, trace recorded {:?}",
                    i + 1,
                    g.rank(),
                    want
                )));
            }
        }
        if g != self.result {
            return Err(TensorError::Internal(
                "replay does not reproduce the result".into(),
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<Value, PolyError> {
        let steps = self
            .steps
            .iter()
            .map(TensorStep::to_json)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(json!({
            "group": self.group.to_json(),
            "steps": steps,
            "result": self.result.to_json()?,
            "ranks": self.rank_after_each_step,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self, TensorError> {
        let group = DiagonalCyclicGroup::from_json(
            v.get("group")
                .ok_or_else(|| PolyError::Json("trace is missing \"group\"".into()))?,
        )?;
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("trace is missing \"steps\"".into()))?
            .iter()
            .map(TensorStep::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let result = Polynomial::from_json(
            v.get("result")
                .ok_or_else(|| PolyError::Json("trace is missing \"result\"".into()))?,
        )?;
        let ranks = v
            .get("ranks")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("trace is missing \"ranks\"".into()))?
            .iter()
            .map(|x| x.as_u64().map(|v| v as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| PolyError::Json("bad ranks".into()))?;
        Ok(ConstructionTrace {
            group,
            steps,
            result,
            rank_after_each_step: ranks,
        })
    }
}

/// Replace the fraction `s` of the term of `g` at `alpha` by its product
/// with `f`. Requires `alpha` in the support of `g` with positive
/// coefficient and `s` in `(0, 1]`. `f` must satisfy the hyperplane
/// identity for the identity to be preserved; that precondition is the
/// caller's (it is not rechecked on every step).
pub fn tensor_at(
    g: &Polynomial,
    alpha: &MultiIndex,
    s: &BigRational,
    f: &Polynomial,
) -> Result<Polynomial, TensorError> {
    if alpha.len() != g.num_vars() {
        return Err(PolyError::ArityMismatch {
            left: g.num_vars(),
            right: alpha.len(),
        }
        .into());
    }
    if g.num_vars() != f.num_vars() {
        return Err(PolyError::ArityMismatch {
            left: g.num_vars(),
            right: f.num_vars(),
        }
        .into());
    }
    let c = g
        .coeff(alpha)
        .ok_or_else(|| TensorError::TargetNotInSupport(alpha.clone()))?;
    if !c.is_positive() {
        return Err(TensorError::TargetNotPositive(alpha.clone()));
    }
    if !s.is_positive() || s > &BigRational::one() {
        return Err(TensorError::FractionOutOfRange(s.clone()));
    }
    let moved = c * s;
    let removed = Polynomial::monomial(g.num_vars(), alpha.clone(), moved.clone());
    let added = f.mul_term(alpha, &moved)?;
    Ok(g.sub(&removed)?.add(&added)?)
}

fn pure_top_power(g: &Polynomial) -> Result<MultiIndex, TensorError> {
    let d = g.total_degree();
    let mi = MultiIndex::power(g.num_vars(), 0, d);
    if g.coeff(&mi).is_some() {
        Ok(mi)
    } else {
        Err(TensorError::NoPureTopPower { degree: d })
    }
}

/// Half-tensoring at the pure top-degree power of `x1`. When `g` has total
/// degree `d` and contains `x1^d`, the rank grows by exactly `rank(f)`.
pub fn op_v(g: &Polynomial, f: &Polynomial) -> Result<Polynomial, TensorError> {
    let mi = pure_top_power(g)?;
    tensor_at(g, &mi, &BigRational::new(BigInt::one(), BigInt::from(2)), f)
}

/// Full tensoring at the pure top-degree power of `x1`. When `g` has total
/// degree `d` and contains `x1^d`, the rank grows by exactly `rank(f) - 1`.
pub fn op_w(g: &Polynomial, f: &Polynomial) -> Result<Polynomial, TensorError> {
    let mi = pure_top_power(g)?;
    tensor_at(g, &mi, &BigRational::one(), f)
}

/// Lexicographically smallest `(j, k)` with `j*a + k*b = m`, for coprime
/// positive denominations. Representability is guaranteed once
/// `m >= (a-1)(b-1)`; below that bound the failure is reported.
pub fn postage_stamp_decompose(m: i64, a: u64, b: u64) -> Result<(u64, u64), TensorError> {
    if a == 0 || b == 0 {
        return Err(TensorError::NonPositiveDenominations { a, b });
    }
    if gcd(a, b) != 1 {
        return Err(TensorError::NotCoprime { a, b });
    }
    if m < 0 {
        return Err(TensorError::NotRepresentable { m, a, b });
    }
    let m = m as u64;
    let mut j = 0;
    while j * a <= m {
        let rest = m - j * a;
        if rest.is_multiple_of(b) {
            return Ok((j, rest / b));
        }
        j += 1;
    }
    Err(TensorError::NotRepresentable { m: m as i64, a, b })
}

/// Build a trace of rank exactly `target_rank` for any admissible group by
/// writing `target_rank - rank(f)` as `j*rank(f) + k*(rank(f)-1)` and
/// applying `W` `k` times followed by `V` `j` times. Succeeds for every
/// target at least `rank(f)^2 - 2 rank(f) + 2`, and for any smaller
/// representable target.
pub fn construct_thm1(
    group: &DiagonalCyclicGroup,
    target_rank: usize,
) -> Result<ConstructionTrace, TensorError> {
    let class = group.classify()?;
    if class.tag == AdmissibilityTag::NotAdmissible {
        return Err(TensorError::NotAdmissible);
    }
    let can = canonical_polynomial(group)?;
    let f = can.f_gamma;
    let base = can.n_gamma;

    let mut steps = Vec::new();
    let mut ranks = Vec::new();
    let mut g = f.clone();
    if target_rank != base {
        let m = target_rank as i64 - base as i64;
        let (j, k) = postage_stamp_decompose(m, base as u64, base as u64 - 1)?;
        for _ in 0..k {
            let mi = pure_top_power(&g)?;
            g = op_w(&g, &f)?;
            expect_rank(&g, ranks.last().copied().unwrap_or(base) + base - 1)?;
            steps.push(TensorStep::multiply(mi));
            ranks.push(g.rank());
        }
        for _ in 0..j {
            let mi = pure_top_power(&g)?;
            g = op_v(&g, &f)?;
            expect_rank(&g, ranks.last().copied().unwrap_or(base) + base)?;
            steps.push(TensorStep::split(mi));
            ranks.push(g.rank());
        }
    }
    expect_rank(&g, target_rank)?;
    Ok(ConstructionTrace {
        group: group.clone(),
        steps,
        result: g,
        rank_after_each_step: ranks,
    })
}

fn expect_rank(g: &Polynomial, want: usize) -> Result<(), TensorError> {
    if g.rank() != want {
        return Err(TensorError::Internal(format!(
            "rank is {}, the counting argument predicts {}",
            g.rank(),
            want
        )));
    }
    Ok(())
}

/// Build a trace of rank exactly `target_rank >= 2 rank(f) - 1` for a
/// two-dimensional admissible group.
///
/// The group is first normalized to its standard form (weights `(1,1)` or
/// `(1,2)`; for order 1 the trivial group runs through the `(1,1)` branch),
/// and the returned trace is stated for the normalized group. The ladder
/// start is the full tensoring at `x1^p`; the middle rungs act at the
/// `i`-th mixed term; past three-times-base the pure top power is tensored
/// repeatedly, adding `rank(f) - 1` each time. Every step's rank is checked
/// against the predicted count.
pub fn construct_thm2(
    group: &DiagonalCyclicGroup,
    target_rank: usize,
) -> Result<ConstructionTrace, TensorError> {
    if group.dimension() != 2 {
        return Err(TensorError::NotTwoDimensional(group.dimension()));
    }
    let class = group.classify()?;
    let normalized = match class.tag {
        AdmissibilityTag::Trivial => DiagonalCyclicGroup::new(1, &[1, 1])?,
        AdmissibilityTag::FullScalar => DiagonalCyclicGroup::new(group.p() as i64, &[1, 1])?,
        AdmissibilityTag::TwoBlock => DiagonalCyclicGroup::new(group.p() as i64, &[1, 2])?,
        _ => return Err(TensorError::NotAdmissible),
    };
    let two_block = class.tag == AdmissibilityTag::TwoBlock;
    let p = normalized.p();
    let can = canonical_polynomial(&normalized)?;
    let f = can.f_gamma;
    let base = can.n_gamma;

    let minimum = 2 * base - 1;
    if target_rank < minimum {
        return Err(TensorError::TargetRankTooSmall {
            requested: target_rank,
            minimum,
        });
    }

    // target = 2 base - 2 + i + d (base - 1) with i unique in [1, base - 1].
    let excess = target_rank - (2 * base - 2);
    let (i, d) = if target_rank <= 3 * base - 3 {
        (excess, 0)
    } else {
        let r = (excess - 1) % (base - 1) + 1;
        (r, (excess - r) / (base - 1))
    };
    if !(1..=base - 1).contains(&i) || excess != i + d * (base - 1) {
        return Err(TensorError::Internal(format!(
            "residue bookkeeping failed: excess {excess}, i {i}, d {d}"
        )));
    }

    let mut steps = Vec::new();
    let mut ranks = Vec::new();

    // g1: full tensoring at x1^p.
    let start = MultiIndex::new(vec![p, 0]);
    let mut g = tensor_at(&f, &start, &BigRational::one(), &f)?;
    expect_rank(&g, 2 * base - 1)?;
    steps.push(TensorStep::multiply(start));
    ranks.push(g.rank());

    // g_i for i >= 2: full tensoring at the i-th mixed term of the base
    // polynomial, which survives in g1 with its original coefficient.
    if i >= 2 {
        let target = if two_block {
            MultiIndex::new(vec![p - 2 * (i as u32 - 1), i as u32 - 1])
        } else {
            MultiIndex::new(vec![p - i as u32, i as u32])
        };
        g = tensor_at(&g, &target, &BigRational::one(), &f)?;
        expect_rank(&g, 2 * base - 2 + i)?;
        steps.push(TensorStep::multiply(target));
        ranks.push(g.rank());
    }

    // d full tensorings at the running pure top power x1^(2p), x1^(3p), ...
    for _ in 0..d {
        let mi = pure_top_power(&g)?;
        let before = g.rank();
        g = op_w(&g, &f)?;
        expect_rank(&g, before + base - 1)?;
        steps.push(TensorStep::multiply(mi));
        ranks.push(g.rank());
    }

    expect_rank(&g, target_rank)?;
    Ok(ConstructionTrace {
        group: normalized,
        steps,
        result: g,
        rank_after_each_step: ranks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn grp(p: i64, w: &[i64]) -> DiagonalCyclicGroup {
        DiagonalCyclicGroup::new(p, w).unwrap()
    }

    fn poly(text: &str) -> Polynomial {
        Polynomial::parse(text, None).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    #[test]
    fn tensoring_the_lowest_term() {
        let f = poly("x1^3 + 3 x1 x2 + x2^3");
        let out = tensor_at(&f, &MultiIndex::new(vec![0, 3]), &BigRational::one(), &f).unwrap();
        assert_eq!(out, poly("x1^3 + 3 x1 x2 + x1^3 x2^3 + 3 x1 x2^4 + x2^6"));
        assert_eq!(out.rank(), 5);
        assert!(out.satisfies_hyperplane_identity());
    }

    #[test]
    fn tensoring_the_top_term() {
        let f = poly("x1 + x2").pow(3);
        let out = tensor_at(&f, &MultiIndex::new(vec![3, 0]), &BigRational::one(), &f).unwrap();
        assert_eq!(
            out,
            poly("3 x1^2 x2 + 3 x1 x2^2 + x2^3 + x1^6 + 3 x1^5 x2 + 3 x1^4 x2^2 + x1^3 x2^3")
        );
        assert_eq!(out.rank(), 7);
    }

    #[test]
    fn tensor_rejects_bad_input() {
        let f = poly("x1^3 + 3 x1 x2 + x2^3");
        let missing = MultiIndex::new(vec![2, 0]);
        assert!(matches!(
            tensor_at(&f, &missing, &BigRational::one(), &f),
            Err(TensorError::TargetNotInSupport(_))
        ));
        let alpha = MultiIndex::new(vec![3, 0]);
        assert!(matches!(
            tensor_at(&f, &alpha, &BigRational::from_integer(BigInt::from(2)), &f),
            Err(TensorError::FractionOutOfRange(_))
        ));
        assert!(matches!(
            tensor_at(&f, &alpha, &BigRational::zero(), &f),
            Err(TensorError::FractionOutOfRange(_))
        ));
        let negative = poly("x1 - x2");
        assert!(matches!(
            tensor_at(
                &negative,
                &MultiIndex::new(vec![0, 1]),
                &BigRational::one(),
                &f
            ),
            Err(TensorError::TargetNotPositive(_))
        ));
    }

    #[test]
    fn v_and_w_operators() {
        let f = poly("x1^3 + 3 x1 x2 + x2^3");
        let v = op_v(&f, &f).unwrap();
        assert_eq!(
            v,
            poly("1/2 x1^3 + 3 x1 x2 + x2^3 + 1/2 x1^6 + 3/2 x1^4 x2 + 1/2 x1^3 x2^3")
        );
        assert_eq!(v.rank(), 6);

        let w = op_w(&f, &f).unwrap();
        assert_eq!(w.rank(), 5);

        let no_pure = poly("3 x1 x2");
        assert!(matches!(
            op_v(&no_pure, &f),
            Err(TensorError::NoPureTopPower { degree: 2 })
        ));
    }

    #[test]
    fn half_fraction_keeps_half_the_coefficient() {
        let f = poly("x1^3 + 3 x1 x2 + x2^3");
        let out = tensor_at(&f, &MultiIndex::new(vec![3, 0]), &half(), &f).unwrap();
        assert_eq!(out.coeff(&MultiIndex::new(vec![3, 0])), Some(&half()));
    }

    #[test]
    fn postage_stamp_examples() {
        assert_eq!(postage_stamp_decompose(2, 3, 2).unwrap(), (0, 1));
        assert!(matches!(
            postage_stamp_decompose(1, 3, 2),
            Err(TensorError::NotRepresentable { m: 1, a: 3, b: 2 })
        ));
        assert_eq!(postage_stamp_decompose(132, 13, 12).unwrap(), (0, 11));
        assert_eq!(postage_stamp_decompose(0, 3, 2).unwrap(), (0, 0));
        assert!(matches!(
            postage_stamp_decompose(5, 4, 2),
            Err(TensorError::NotCoprime { .. })
        ));
        assert!(matches!(
            postage_stamp_decompose(5, 0, 2),
            Err(TensorError::NonPositiveDenominations { .. })
        ));
    }

    #[test]
    fn postage_stamp_prefers_small_j() {
        // 6 = 2*3 = 0*3 + 3*2: lexicographically smallest is j = 0.
        assert_eq!(postage_stamp_decompose(6, 3, 2).unwrap(), (0, 3));
    }

    #[test]
    fn thm1_base_case_is_empty_trace() {
        let trace = construct_thm1(&grp(3, &[1, 2]), 3).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_rank(), 3);
        trace.verify_replay().unwrap();
    }

    #[test]
    fn thm1_rank_eight() {
        let trace = construct_thm1(&grp(3, &[1, 2]), 8).unwrap();
        assert_eq!(trace.final_rank(), 8);
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.rank_after_each_step, vec![5, 8]);
        trace.verify_replay().unwrap();
    }

    #[test]
    fn thm1_unrepresentable_target() {
        // base 3: 4 - 3 = 1 is not j*3 + k*2.
        assert!(matches!(
            construct_thm1(&grp(3, &[1, 2]), 4),
            Err(TensorError::NotRepresentable { .. })
        ));
        assert!(matches!(
            construct_thm1(&grp(3, &[1, 2]), 2),
            Err(TensorError::NotRepresentable { .. })
        ));
    }

    #[test]
    fn thm1_rejects_non_admissible() {
        assert!(matches!(
            construct_thm1(&grp(5, &[1, 4]), 20),
            Err(TensorError::NotAdmissible)
        ));
    }

    #[test]
    fn thm1_three_variable_guarantee_start() {
        let trace = construct_thm1(&grp(5, &[1, 1, 2]), 145).unwrap();
        assert_eq!(trace.final_rank(), 145);
        trace.verify_replay().unwrap();
    }

    #[test]
    fn thm2_g1_for_scalar_cubic() {
        let trace = construct_thm2(&grp(3, &[1, 1]), 7).unwrap();
        assert_eq!(trace.final_rank(), 7);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(
            trace.result,
            poly("3 x1^2 x2 + 3 x1 x2^2 + x2^3 + x1^6 + 3 x1^5 x2 + 3 x1^4 x2^2 + x1^3 x2^3")
        );
    }

    #[test]
    fn thm2_second_rung_scalar() {
        let trace = construct_thm2(&grp(3, &[1, 1]), 8).unwrap();
        assert_eq!(trace.final_rank(), 8);
        assert_eq!(
            trace.result,
            poly("3 x1^2 x2 + x2^3 + x1^6 + 3 x1^5 x2 + 6 x1^4 x2^2 + 10 x1^3 x2^3 + 9 x1^2 x2^4 + 3 x1 x2^5")
        );
    }

    #[test]
    fn thm2_second_rung_two_block() {
        let trace = construct_thm2(&grp(3, &[1, 2]), 6).unwrap();
        assert_eq!(trace.final_rank(), 6);
        assert_eq!(
            trace.result,
            poly("x2^3 + x1^6 + 6 x1^4 x2 + x1^3 x2^3 + 9 x1^2 x2^2 + 3 x1 x2^4")
        );
    }

    #[test]
    fn thm2_below_bound_rejected() {
        // base 3 for weights (1,2): the ladder starts at 5.
        assert!(matches!(
            construct_thm2(&grp(3, &[1, 2]), 4),
            Err(TensorError::TargetRankTooSmall {
                requested: 4,
                minimum: 5
            })
        ));
        assert!(matches!(
            construct_thm2(&grp(5, &[1, 1, 2]), 100),
            Err(TensorError::NotTwoDimensional(3))
        ));
    }

    #[test]
    fn thm2_normalizes_equivalent_groups() {
        // (5, (2,2)) is the scalar family; (5, (3,1)) relabels to (1,2).
        let a = construct_thm2(&grp(5, &[2, 2]), 15).unwrap();
        assert_eq!(a.group.weights(), &[1, 1]);
        assert_eq!(a.final_rank(), 15);
        a.verify_replay().unwrap();

        let b = construct_thm2(&grp(5, &[3, 1]), 10).unwrap();
        assert_eq!(b.group.weights(), &[1, 2]);
        assert_eq!(b.final_rank(), 10);
        b.verify_replay().unwrap();
    }

    #[test]
    fn thm2_trivial_group_ladder() {
        let trace = construct_thm2(&grp(1, &[0, 0]), 3).unwrap();
        assert_eq!(trace.final_rank(), 3);
        let trace = construct_thm2(&grp(1, &[0, 0]), 9).unwrap();
        assert_eq!(trace.final_rank(), 9);
        trace.verify_replay().unwrap();
    }

    #[test]
    fn trace_json_round_trip() {
        let trace = construct_thm1(&grp(3, &[1, 2]), 8).unwrap();
        let v = trace.to_json().unwrap();
        let back = ConstructionTrace::from_json(&v).unwrap();
        assert_eq!(back, trace);
        back.verify_replay().unwrap();
        assert_eq!(back.final_rank(), 8);
    }

    #[test]
    fn step_display() {
        let s = TensorStep::multiply(MultiIndex::new(vec![3, 0]));
        assert_eq!(s.to_string(), "mul x1^3");
        let s = TensorStep::split(MultiIndex::new(vec![2, 1]));
        assert_eq!(s.to_string(), "split x1^2 x2");
        let s = TensorStep {
            target: MultiIndex::new(vec![1, 0]),
            fraction: BigRational::new(BigInt::from(1), BigInt::from(3)),
        };
        assert_eq!(s.kind_str(), "frac 1/3");
        assert!(s.fraction.to_f64().unwrap() < 0.5);
    }
}
