//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Polynomial`] is a map from exponent vectors to nonzero `BigRational`
//! coefficients. The stored form is canonical: zero coefficients are never
//! kept and terms iterate in graded-lexicographic order (total degree first,
//! then lexicographic with `x1 > x2 > ...`). Serialization walks the terms
//! in descending graded-lex order, so the leading term prints first.

pub mod cyclotomic;
pub mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub use parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("cyclotomic order must be at least 1")]
    InvalidCyclotomicOrder,
    #[error("coefficient does not fit in a JSON integer")]
    CoefficientTooLarge,
    #[error("invalid polynomial JSON: {0}")]
    Json(String),
}

/// Exponent vector of a monomial. The entry at position `j` is the exponent
/// of `x_{j+1}`.
///
/// The `Ord` instance is graded-lex: compare total degree, then compare the
/// exponent vectors lexicographically (so a higher power of `x1` wins ties).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// The constant monomial in `len` variables.
    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The monomial `x_{var+1}^e` in `len` variables.
    pub fn power(len: usize, var: usize, e: u32) -> Self {
        assert!(var < len, "variable index out of range");
        let mut exps = vec![0; len];
        exps[var] = e;
        MultiIndex(exps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// Total degree: the sum of all exponents.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Monomial product: componentwise sum of exponents.
    pub fn mul(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Some((var, e))` when exactly one exponent is nonzero.
    pub fn as_pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (j, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((j, e));
            }
        }
        found
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, letter: char) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "1");
        }
        let mut first = true;
        for (j, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", letter, j + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }

    /// Render with `z` variables, as for map components.
    pub fn display_z(&self) -> MonomialDisplay<'_> {
        MonomialDisplay {
            mi: self,
            letter: 'z',
        }
    }
}

pub struct MonomialDisplay<'a> {
    mi: &'a MultiIndex,
    letter: char,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.mi.fmt_with(f, self.letter)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, 'x')
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Counts of positive and negative coefficients. Their sum is the rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.n_plus + self.n_minus
    }

    pub fn to_json(&self) -> Value {
        json!({ "n_plus": self.n_plus, "n_minus": self.n_minus })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n_plus, self.n_minus)
    }
}

/// Sparse multivariate polynomial over the rationals, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, BigRational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        assert!(num_vars >= 1, "polynomials need at least one variable");
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(num_vars), c);
        }
        p
    }

    pub fn from_integer(num_vars: usize, c: i64) -> Self {
        Self::constant(num_vars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The variable `x_{var+1}` as a polynomial in `num_vars` variables.
    pub fn variable(num_vars: usize, var: usize) -> Self {
        Self::monomial(
            num_vars,
            MultiIndex::power(num_vars, var, 1),
            BigRational::one(),
        )
    }

    pub fn monomial(num_vars: usize, mi: MultiIndex, c: BigRational) -> Self {
        assert_eq!(mi.len(), num_vars, "exponent vector length mismatch");
        let mut p = Self::zero(num_vars);
        if !c.is_zero() {
            p.terms.insert(mi, c);
        }
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (MultiIndex, BigRational)>,
    {
        let mut p = Self::zero(num_vars);
        for (mi, c) in terms {
            if mi.len() != num_vars {
                return Err(PolyError::ArityMismatch {
                    left: num_vars,
                    right: mi.len(),
                });
            }
            p.add_term(mi, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mi: MultiIndex, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mi) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&MultiIndex::zero(self.num_vars))
                .is_some_and(|c| c.is_one())
    }

    /// Number of stored monomials; for a polynomial with a diagonal
    /// Hermitian coefficient form this is exactly its rank.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Counts of positive and negative coefficients.
    pub fn signature(&self) -> Signature {
        let n_plus = self.terms.values().filter(|c| c.is_positive()).count();
        Signature {
            n_plus,
            n_minus: self.terms.len() - n_plus,
        }
    }

    pub fn rank_and_signature(&self) -> (usize, Signature) {
        (self.rank(), self.signature())
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lex order (serialization order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&MultiIndex, &BigRational)> {
        self.terms.iter().rev()
    }

    /// Support in descending graded-lex order.
    pub fn support_desc(&self) -> impl Iterator<Item = &MultiIndex> {
        self.terms.keys().rev()
    }

    pub fn coeff(&self, mi: &MultiIndex) -> Option<&BigRational> {
        self.terms.get(mi)
    }

    /// Largest monomial in graded-lex order, if any.
    pub fn leading_monomial(&self) -> Option<&MultiIndex> {
        self.terms.keys().next_back()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|mi| mi.degree()).max().unwrap_or(0)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    fn check_arity(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::ArityMismatch {
                left: self.num_vars,
                right: other.num_vars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (mi, c) in &other.terms {
            out.add_term(mi.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (mi, c) in &other.terms {
            out.add_term(mi.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = Self::zero(self.num_vars);
        for (mi, c) in &self.terms {
            out.terms.insert(mi.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Polynomial {
        let mut out = Self::zero(self.num_vars);
        if s.is_zero() {
            return out;
        }
        for (mi, c) in &self.terms {
            out.terms.insert(mi.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.num_vars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiply by the single term `c * x^mi`.
    pub fn mul_term(&self, mi: &MultiIndex, c: &BigRational) -> Result<Polynomial, PolyError> {
        if mi.len() != self.num_vars {
            return Err(PolyError::ArityMismatch {
                left: self.num_vars,
                right: mi.len(),
            });
        }
        let mut out = Self::zero(self.num_vars);
        if c.is_zero() {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            out.terms.insert(a.mul(mi), ca * c);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Self::one(self.num_vars);
        for _ in 0..e {
            out = out.mul(self).expect("same arity");
        }
        out
    }

    /// Substitute `x_n := 1 - x_1 - ... - x_{n-1}` and expand.
    ///
    /// The result lives in `n - 1` variables (in one variable when `n == 1`,
    /// where the substitution is `x_1 := 1` and the result is constant).
    /// A polynomial takes the value 1 on the hyperplane `x_1 + ... + x_n = 1`
    /// exactly when the result is the constant 1.
    pub fn restrict_to_hyperplane(&self) -> Polynomial {
        let n = self.num_vars;
        if n == 1 {
            let mut sum = BigRational::zero();
            for c in self.terms.values() {
                sum += c;
            }
            return Polynomial::constant(1, sum);
        }
        let m = n - 1;
        let mut s = Polynomial::one(m);
        for j in 0..m {
            s = s.sub(&Polynomial::variable(m, j)).expect("same arity");
        }
        let max_k = self.terms.keys().map(|mi| mi.get(m)).max().unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(max_k + 1);
        powers.push(Polynomial::one(m));
        for k in 1..=max_k {
            let next = powers[k - 1].mul(&s).expect("same arity");
            powers.push(next);
        }
        let mut out = Polynomial::zero(m);
        for (mi, c) in &self.terms {
            let head = MultiIndex::new(mi.exponents()[..m].to_vec());
            let part = powers[mi.get(m) as usize]
                .mul_term(&head, c)
                .expect("same arity");
            out = out.add(&part).expect("same arity");
        }
        out
    }

    pub fn satisfies_hyperplane_identity(&self) -> bool {
        self.restrict_to_hyperplane().is_one()
    }

    /// JSON form `{"terms": [{"coeff": [num, den], "exps": [...]}, ...], "vars": n}`
    /// with terms in descending graded-lex order.
    pub fn to_json(&self) -> Result<Value, PolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mi, c) in self.terms_desc() {
            terms.push(json!({ "coeff": rational_json(c)?, "exps": mi.exponents() }));
        }
        Ok(json!({ "vars": self.num_vars, "terms": terms }))
    }

    pub fn from_json(v: &Value) -> Result<Polynomial, PolyError> {
        let obj = v
            .as_object()
            .ok_or_else(|| PolyError::Json("expected object".into()))?;
        let vars = obj
            .get("vars")
            .and_then(Value::as_u64)
            .ok_or_else(|| PolyError::Json("missing or invalid \"vars\"".into()))?
            as usize;
        if vars == 0 {
            return Err(PolyError::Json("\"vars\" must be positive".into()));
        }
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| PolyError::Json("missing or invalid \"terms\"".into()))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_array)
                .ok_or_else(|| PolyError::Json("term is missing \"coeff\"".into()))?;
            if coeff.len() != 2 {
                return Err(PolyError::Json("\"coeff\" must be [num, den]".into()));
            }
            let num = coeff[0]
                .as_i64()
                .map(BigInt::from)
                .or_else(|| coeff[0].as_u64().map(BigInt::from))
                .ok_or_else(|| PolyError::Json("non-integer coefficient".into()))?;
            let den = coeff[1]
                .as_i64()
                .map(BigInt::from)
                .or_else(|| coeff[1].as_u64().map(BigInt::from))
                .ok_or_else(|| PolyError::Json("non-integer coefficient".into()))?;
            if den.is_zero() {
                return Err(PolyError::Json("zero denominator".into()));
            }
            let exps = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| PolyError::Json("term is missing \"exps\"".into()))?;
            let mut e = Vec::with_capacity(exps.len());
            for x in exps {
                let x = x
                    .as_u64()
                    .ok_or_else(|| PolyError::Json("exponents must be non-negative".into()))?;
                e.push(u32::try_from(x).map_err(|_| PolyError::Json("exponent too large".into()))?);
            }
            parsed.push((MultiIndex::new(e), BigRational::new(num, den)));
        }
        Polynomial::from_terms(vars, parsed)
    }

    /// Parse the ASCII text grammar; see [`parse::parse_polynomial`].
    pub fn parse(text: &str, num_vars: Option<usize>) -> Result<Polynomial, ParseError> {
        parse::parse_polynomial(text, num_vars)
    }
}

/// Exact rational as a JSON `[num, den]` pair. Values outside the i128
/// range are refused rather than rounded.
pub fn rational_json(value: &BigRational) -> Result<Value, PolyError> {
    let num = value
        .numer()
        .to_i128()
        .ok_or(PolyError::CoefficientTooLarge)?;
    let den = value
        .denom()
        .to_i128()
        .ok_or(PolyError::CoefficientTooLarge)?;
    Ok(json!([num, den]))
}

fn fmt_coeff_abs(c: &BigRational) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mi, c)) in self.terms_desc().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = fmt_coeff_abs(c);
            if mi.is_constant() {
                write!(f, "{}", abs)?;
            } else if abs == "1" {
                write!(f, "{}", mi)?;
            } else {
                write!(f, "{} {}", abs, mi)?;
            }
        }
        Ok(())
    }
}
