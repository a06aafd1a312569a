//! Integers of the p-th cyclotomic field.
//!
//! Elements live in `Z[t]/(Phi_p(t))` where `Phi_p` is the p-th cyclotomic
//! polynomial, with coordinates in the power basis `1, t, ..., t^(phi(p)-1)`.
//! Working modulo `Phi_p` rather than `t^p - 1` means that a Galois-invariant
//! product is a literal rational integer, which [`CyclotomicInteger::as_integer`]
//! can check mechanically: the element is an integer exactly when every
//! coordinate past the constant one vanishes.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::PolyError;

/// Dense coefficients (ascending degree) of the p-th cyclotomic polynomial.
///
/// Computed by the classical recursion: `Phi_n` is `t^n - 1` divided by the
/// product of `Phi_d` over the proper divisors `d` of `n`.
pub fn cyclotomic_polynomial(p: u32) -> Vec<BigInt> {
    assert!(p >= 1, "cyclotomic order must be at least 1");
    let mut cache: Vec<Option<Vec<BigInt>>> = vec![None; (p + 1) as usize];
    cyclotomic_rec(p, &mut cache)
}

fn cyclotomic_rec(n: u32, cache: &mut Vec<Option<Vec<BigInt>>>) -> Vec<BigInt> {
    if let Some(v) = &cache[n as usize] {
        return v.clone();
    }
    // t^n - 1
    let mut num = vec![BigInt::zero(); (n + 1) as usize];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut result = num;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_rec(d, cache);
            result = div_exact_monic(&result, &phi_d);
        }
    }
    cache[n as usize] = Some(result.clone());
    result
}

/// Exact division of dense integer polynomials by a monic divisor.
fn div_exact_monic(num: &[BigInt], div: &[BigInt]) -> Vec<BigInt> {
    let dd = div.len() - 1;
    debug_assert!(div[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[i]);
        if c.is_zero() {
            continue;
        }
        let shift = i - dd;
        for (k, m) in div.iter().enumerate().take(dd) {
            let delta = &c * m;
            rem[shift + k] -= delta;
        }
        quot[shift] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    while quot.len() > 1 && quot.last().is_some_and(Zero::is_zero) {
        quot.pop();
    }
    quot
}

/// Shared modulus for arithmetic at a fixed order `p`.
#[derive(Debug, Clone)]
pub struct CyclotomicRing {
    p: u32,
    modulus: Vec<BigInt>,
}

impl CyclotomicRing {
    pub fn new(p: u32) -> Result<Self, PolyError> {
        if p == 0 {
            return Err(PolyError::InvalidCyclotomicOrder);
        }
        Ok(CyclotomicRing {
            p,
            modulus: cyclotomic_polynomial(p),
        })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    /// Degree of `Phi_p`, i.e. Euler's totient of `p`.
    pub fn phi(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduce an arbitrary dense `t`-polynomial modulo `Phi_p` and pad to the
    /// basis length. Reduction is idempotent.
    fn reduce(&self, mut dense: Vec<BigInt>) -> Vec<BigInt> {
        let phi = self.phi();
        for i in (phi..dense.len()).rev() {
            let c = std::mem::take(&mut dense[i]);
            if c.is_zero() {
                continue;
            }
            let shift = i - phi;
            for (k, m) in self.modulus.iter().enumerate().take(phi) {
                let delta = &c * m;
                dense[shift + k] -= delta;
            }
        }
        dense.truncate(phi);
        dense.resize(phi, BigInt::zero());
        dense
    }

    pub fn from_dense(&self, dense: Vec<BigInt>) -> CyclotomicInteger {
        CyclotomicInteger {
            p: self.p,
            coords: self.reduce(dense),
        }
    }

    pub fn zero(&self) -> CyclotomicInteger {
        CyclotomicInteger {
            p: self.p,
            coords: vec![BigInt::zero(); self.phi()],
        }
    }

    pub fn integer(&self, n: BigInt) -> CyclotomicInteger {
        let mut coords = vec![BigInt::zero(); self.phi()];
        coords[0] = n;
        CyclotomicInteger { p: self.p, coords }
    }

    pub fn one(&self) -> CyclotomicInteger {
        self.integer(BigInt::one())
    }

    /// `t^k` reduced modulo `Phi_p`; `t` is a primitive p-th root of unity.
    pub fn root_power(&self, k: u32) -> CyclotomicInteger {
        let k = (k % self.p) as usize;
        let mut dense = vec![BigInt::zero(); k + 1];
        dense[k] = BigInt::one();
        self.from_dense(dense)
    }

    fn check(&self, a: &CyclotomicInteger) -> Result<(), PolyError> {
        if a.p != self.p {
            return Err(PolyError::OrderMismatch {
                left: self.p,
                right: a.p,
            });
        }
        Ok(())
    }

    pub fn add(
        &self,
        a: &CyclotomicInteger,
        b: &CyclotomicInteger,
    ) -> Result<CyclotomicInteger, PolyError> {
        self.check(a)?;
        self.check(b)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        Ok(CyclotomicInteger { p: self.p, coords })
    }

    pub fn sub(
        &self,
        a: &CyclotomicInteger,
        b: &CyclotomicInteger,
    ) -> Result<CyclotomicInteger, PolyError> {
        self.check(a)?;
        self.check(b)?;
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
        Ok(CyclotomicInteger { p: self.p, coords })
    }

    /// Exact product, reduced modulo `Phi_p` so the result is canonical.
    pub fn mul(
        &self,
        a: &CyclotomicInteger,
        b: &CyclotomicInteger,
    ) -> Result<CyclotomicInteger, PolyError> {
        self.check(a)?;
        self.check(b)?;
        let phi = self.phi();
        let mut dense = vec![BigInt::zero(); 2 * phi];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                dense[i + j] += x * y;
            }
        }
        Ok(self.from_dense(dense))
    }
}

/// Element of `Z[t]/(Phi_p(t))` in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    p: u32,
    coords: Vec<BigInt>,
}

impl CyclotomicInteger {
    /// Build from arbitrary `t`-polynomial coefficients (ascending degree),
    /// reducing modulo `Phi_p`.
    pub fn from_dense(p: u32, coeffs: &[BigInt]) -> Result<Self, PolyError> {
        Ok(CyclotomicRing::new(p)?.from_dense(coeffs.to_vec()))
    }

    pub fn integer(p: u32, n: i64) -> Result<Self, PolyError> {
        Ok(CyclotomicRing::new(p)?.integer(BigInt::from(n)))
    }

    pub fn root_power(p: u32, k: u32) -> Result<Self, PolyError> {
        Ok(CyclotomicRing::new(p)?.root_power(k))
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `Some(n)` when the element is the rational integer `n`, i.e. every
    /// coordinate beyond the constant one is zero.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn mul(&self, other: &CyclotomicInteger) -> Result<CyclotomicInteger, PolyError> {
        if self.p != other.p {
            return Err(PolyError::OrderMismatch {
                left: self.p,
                right: other.p,
            });
        }
        CyclotomicRing::new(self.p)?.mul(self, other)
    }

    pub fn add(&self, other: &CyclotomicInteger) -> Result<CyclotomicInteger, PolyError> {
        if self.p != other.p {
            return Err(PolyError::OrderMismatch {
                left: self.p,
                right: other.p,
            });
        }
        CyclotomicRing::new(self.p)?.add(self, other)
    }
}
