//! The canonical invariant polynomial of a diagonal cyclic group.
//!
//! For a fixed-point-free group of order `p` with weights `(a_1, ..., a_n)`,
//! the canonical polynomial is
//!
//! ```text
//! f(x) = 1 - prod_{k=0}^{p-1} (1 - sum_j w^(k a_j) x_j),    w = e^(2 pi i / p),
//! ```
//!
//! obtained by substituting `x_j = |z_j|^2` into the group-averaged Hermitian
//! form. The product is expanded exactly with [`CyclotomicInteger`]
//! coefficients; since it is invariant under every Galois automorphism, each
//! final coefficient must be a rational integer, and that integrality is
//! checked coefficient by coefficient. An independent double-precision
//! expansion ([`canonical_float_oracle`]) cross-validates the exact result.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::gcd;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::groups::{AdmissibilityTag, DiagonalCyclicGroup, GroupError};
use crate::poly::cyclotomic::{CyclotomicInteger, CyclotomicRing};
use crate::poly::{MultiIndex, PolyError, Polynomial, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("group order {0} is too large for the floating-point oracle (limit 64)")]
    OrderTooLargeForOracle(u32),
    #[error("the two-variable closed form with weights (1,2) needs odd p >= 3, got {0}")]
    InvalidClosedFormOrder(u32),
    #[error("internal arithmetic check failed: {0}")]
    Internal(String),
}

/// Canonical polynomial with its rank data. `n_gamma` is the rank of
/// `f_gamma`, the dimension of the target of the canonical sphere map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalResult {
    pub group: DiagonalCyclicGroup,
    pub f_gamma: Polynomial,
    pub n_gamma: usize,
    pub signature: Signature,
}

/// One component of the monomial map associated with a polynomial: the
/// squared modulus of the coefficient, the exponent, and which side of the
/// hyperquadric it lands on. `F` components come from positive coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapComponent {
    pub squared_coeff: BigRational,
    pub exponent: MultiIndex,
    pub side: MapSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapSide {
    F,
    G,
}

impl MapSide {
    pub fn as_str(&self) -> &'static str {
        match self {
            MapSide::F => "F",
            MapSide::G => "G",
        }
    }
}

/// The two closed-form families in two variables: weights `(1,1)` for any
/// `p >= 1` and weights `(1,2)` for odd `p >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormFamily {
    Gp1,
    Gp2,
}

/// Expand the canonical product exactly and return the polynomial with rank
/// and signature.
///
/// Fails with [`CanonicalError::Internal`] if any coefficient of the expanded
/// product is not a rational integer or the constant term is not 1; both
/// would signal an arithmetic bug, not bad input.
pub fn canonical_polynomial(
    group: &DiagonalCyclicGroup,
) -> Result<CanonicalResult, CanonicalError> {
    if !group.is_fixed_point_free() {
        return Err(GroupError::NotFixedPointFree.into());
    }
    let p = group.p();
    let n = group.dimension();
    let ring = CyclotomicRing::new(p)?;

    // Product of the p linear factors 1 - sum_j w^(k a_j) x_j. Every factor
    // has degree 1, so no term of degree > p can ever appear.
    let mut product: BTreeMap<MultiIndex, CyclotomicInteger> = BTreeMap::new();
    product.insert(MultiIndex::zero(n), ring.one());
    for k in 0..p {
        let factor_coeffs: Vec<CyclotomicInteger> = group
            .weights()
            .iter()
            .map(|&a| ring.root_power((k as u64 * a as u64 % p as u64) as u32))
            .collect();
        let mut next: BTreeMap<MultiIndex, CyclotomicInteger> = BTreeMap::new();
        for (mi, c) in &product {
            merge(&ring, &mut next, mi.clone(), c.clone())?;
            for (j, w) in factor_coeffs.iter().enumerate() {
                let mut exps = mi.exponents().to_vec();
                exps[j] += 1;
                let shifted = ring.mul(c, w)?;
                merge_neg(&ring, &mut next, MultiIndex::new(exps), shifted)?;
            }
        }
        product = next;
    }

    let mut terms: Vec<(MultiIndex, BigRational)> = Vec::with_capacity(product.len());
    for (mi, c) in product {
        let int = c
            .as_integer()
            .ok_or_else(|| CanonicalError::Internal(format!("non-integral coefficient at {mi}")))?;
        if mi.is_constant() {
            if int != BigInt::one() {
                return Err(CanonicalError::Internal(format!(
                    "constant term of the product is {int}, expected 1"
                )));
            }
            continue;
        }
        if !int.is_zero() {
            terms.push((mi, BigRational::from_integer(-int)));
        }
    }
    let f_gamma = Polynomial::from_terms(n, terms)?;

    // Independent route for two-block groups: composing the two-variable
    // closed form with the block sums must reproduce the expansion.
    let class = group.classify()?;
    if class.tag == AdmissibilityTag::TwoBlock {
        let composed = two_block_composition(group)?;
        if composed != f_gamma {
            return Err(CanonicalError::Internal(
                "two-block composition disagrees with the product expansion".into(),
            ));
        }
    }

    let (n_gamma, signature) = f_gamma.rank_and_signature();
    Ok(CanonicalResult {
        group: group.clone(),
        f_gamma,
        n_gamma,
        signature,
    })
}

fn merge(
    ring: &CyclotomicRing,
    acc: &mut BTreeMap<MultiIndex, CyclotomicInteger>,
    mi: MultiIndex,
    c: CyclotomicInteger,
) -> Result<(), CanonicalError> {
    match acc.entry(mi) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = ring.add(o.get(), &c)?;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
    Ok(())
}

fn merge_neg(
    ring: &CyclotomicRing,
    acc: &mut BTreeMap<MultiIndex, CyclotomicInteger>,
    mi: MultiIndex,
    c: CyclotomicInteger,
) -> Result<(), CanonicalError> {
    match acc.entry(mi) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(ring.sub(&ring.zero(), &c)?);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let diff = ring.sub(o.get(), &c)?;
            if diff.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = diff;
            }
        }
    }
    Ok(())
}

/// For a two-block group, the canonical polynomial is the two-variable
/// closed form evaluated at the block sums: the variables whose weight is a
/// unit multiple of 1 feed the first slot, the weight-2 ones the second.
fn two_block_composition(group: &DiagonalCyclicGroup) -> Result<Polynomial, CanonicalError> {
    let p = group.p();
    let n = group.dimension();
    let unit = (1..=p)
        .filter(|&u| gcd(u, p) == 1)
        .find(|&u| {
            group
                .weights()
                .iter()
                .all(|&a| matches!((a as u64 * u as u64 % p as u64) as u32, 1 | 2))
        })
        .ok_or_else(|| CanonicalError::Internal("two-block witness unit not found".into()))?;
    let mut sum_one = Polynomial::zero(n);
    let mut sum_two = Polynomial::zero(n);
    for (j, &a) in group.weights().iter().enumerate() {
        let target = (a as u64 * unit as u64 % p as u64) as u32;
        let var = Polynomial::variable(n, j);
        if target == 1 {
            sum_one = sum_one.add(&var)?;
        } else {
            sum_two = sum_two.add(&var)?;
        }
    }
    let f2 = closed_form(ClosedFormFamily::Gp2, p)?;
    let mut out = Polynomial::zero(n);
    for (mi, c) in f2.terms() {
        let part = sum_one
            .pow(mi.get(0))
            .mul(&sum_two.pow(mi.get(1)))?
            .scale(c);
        out = out.add(&part)?;
    }
    Ok(out)
}

/// Closed forms for the two-variable families:
/// `(x + y)^p` for weights `(1,1)`, and
/// `x^p + c_1 x^(p-2) y + ... + c_((p-1)/2) x y^((p-1)/2) + y^p` with
/// `c_k = p / (p - k) * binom(p - k, k)` for weights `(1,2)`.
pub fn closed_form(family: ClosedFormFamily, p: u32) -> Result<Polynomial, CanonicalError> {
    match family {
        ClosedFormFamily::Gp1 => {
            if p == 0 {
                return Err(GroupError::InvalidOrder(0).into());
            }
            let mut terms = Vec::with_capacity(p as usize + 1);
            for k in 0..=p {
                terms.push((
                    MultiIndex::new(vec![p - k, k]),
                    BigRational::from_integer(binomial(p, k)),
                ));
            }
            Ok(Polynomial::from_terms(2, terms)?)
        }
        ClosedFormFamily::Gp2 => {
            if p < 3 || p.is_multiple_of(2) {
                return Err(CanonicalError::InvalidClosedFormOrder(p));
            }
            let mut terms = vec![
                (MultiIndex::new(vec![p, 0]), BigRational::one()),
                (MultiIndex::new(vec![0, p]), BigRational::one()),
            ];
            for k in 1..=(p - 1) / 2 {
                let c = BigRational::new(BigInt::from(p) * binomial(p - k, k), BigInt::from(p - k));
                terms.push((MultiIndex::new(vec![p - 2 * k, k]), c));
            }
            Ok(Polynomial::from_terms(2, terms)?)
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Approximate canonical polynomial, for cross-validation only.
#[derive(Debug, Clone)]
pub struct FloatPolynomial {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl FloatPolynomial {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mi: &MultiIndex) -> f64 {
        self.terms.get(mi).copied().unwrap_or(0.0)
    }

    /// Largest absolute coefficient difference against an exact polynomial,
    /// over the union of supports.
    pub fn max_difference(&self, exact: &Polynomial) -> f64 {
        let mut worst = 0.0f64;
        for (mi, c) in exact.terms() {
            let approx = self.coeff(mi);
            worst = worst.max((approx - c.to_f64().unwrap_or(f64::NAN)).abs());
        }
        for (mi, &c) in &self.terms {
            if exact.coeff(mi).is_none() {
                worst = worst.max(c.abs());
            }
        }
        worst
    }
}

/// Expand the same product with double-precision complex arithmetic using
/// `w = exp(2 pi i / p)`, discarding imaginary parts. Independent of the
/// exact cyclotomic route; used only for cross-validation. Orders above 64
/// are rejected to bound rounding error.
pub fn canonical_float_oracle(
    group: &DiagonalCyclicGroup,
) -> Result<FloatPolynomial, CanonicalError> {
    if !group.is_fixed_point_free() {
        return Err(GroupError::NotFixedPointFree.into());
    }
    let p = group.p();
    if p > 64 {
        return Err(CanonicalError::OrderTooLargeForOracle(p));
    }
    let n = group.dimension();
    let tau = 2.0 * std::f64::consts::PI / p as f64;
    let mut product: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    product.insert(MultiIndex::zero(n), Complex64::new(1.0, 0.0));
    for k in 0..p {
        let factor_coeffs: Vec<Complex64> = group
            .weights()
            .iter()
            .map(|&a| {
                let angle = tau * ((k as u64 * a as u64 % p as u64) as f64);
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let mut next: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (mi, c) in &product {
            *next.entry(mi.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
            for (j, w) in factor_coeffs.iter().enumerate() {
                let mut exps = mi.exponents().to_vec();
                exps[j] += 1;
                *next
                    .entry(MultiIndex::new(exps))
                    .or_insert(Complex64::new(0.0, 0.0)) -= c * w;
            }
        }
        product = next;
    }
    let mut terms = BTreeMap::new();
    for (mi, c) in product {
        let re = if mi.is_constant() { 1.0 - c.re } else { -c.re };
        if re.abs() > 1e-9 {
            terms.insert(mi, re);
        }
    }
    Ok(FloatPolynomial { num_vars: n, terms })
}

/// Split a polynomial into map components: one per monomial, with the
/// absolute coefficient as the squared modulus and the side given by the
/// coefficient sign. When all coefficients are non-negative and the
/// hyperplane identity holds, the components define a sphere map into
/// `S^(2 rank - 1)`.
pub fn extract_map(poly: &Polynomial) -> Vec<MapComponent> {
    poly.terms_desc()
        .map(|(mi, c)| MapComponent {
            squared_coeff: c.abs(),
            exponent: mi.clone(),
            side: if c.is_positive() {
                MapSide::F
            } else {
                MapSide::G
            },
        })
        .collect()
}

/// Decimal square root of a non-negative rational to 12 significant digits,
/// for display next to the exact squared coefficient.
pub fn sqrt_display(value: &BigRational) -> String {
    let v = value.to_f64().unwrap_or(f64::NAN);
    if !v.is_finite() || v < 0.0 {
        return "NaN".into();
    }
    let root = v.sqrt();
    if root == 0.0 {
        return "0".into();
    }
    let formatted = format!("{:.*e}", 11, root);
    // Re-render scientific notation as plain decimal when reasonable.
    if let Some((mantissa, exp)) = formatted.split_once('e') {
        let exp: i32 = exp.parse().unwrap_or(0);
        if (-4..12).contains(&exp) {
            let digits = 11 - exp;
            if digits >= 0 {
                return format!("{:.*}", digits as usize, root);
            }
        }
        return format!("{mantissa}e{exp}");
    }
    formatted
}
