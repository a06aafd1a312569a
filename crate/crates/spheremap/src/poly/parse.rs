//! Text grammar for polynomials.
//!
//! ```text
//! polynomial := ['-'] term (('+'|'-') term)*
//! term       := [coeff] factor*
//! coeff      := integer | integer '/' integer
//! factor     := 'x' index ['^' exponent]
//! ```
//!
//! Whitespace is insignificant. A missing coefficient means 1 and a missing
//! exponent means 1. Variable indices are 1-based. Negative exponents are
//! rejected. `"x1^7 + 7 x1^5 x2"` and `"1/2 x1^6"` are well formed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{MultiIndex, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_uint(&mut self, what: &str) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(start, format!("expected {what}")));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(digits.parse().unwrap())
    }
}

/// Parse a polynomial. When `num_vars` is given, every variable index must be
/// at most `num_vars` and the result uses exactly that many variables;
/// otherwise the arity is the largest index encountered (at least 1).
pub fn parse_polynomial(text: &str, num_vars: Option<usize>) -> Result<Polynomial, ParseError> {
    let mut sc = Scanner::new(text);
    let mut terms: Vec<(Vec<(usize, u32)>, BigRational)> = Vec::new();
    let mut max_var = 0usize;

    let mut negative = sc.eat(b'-');
    loop {
        let (factors, coeff) = parse_term(&mut sc, num_vars, &mut max_var)?;
        terms.push((factors, if negative { -coeff } else { coeff }));
        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                negative = false;
            }
            Some(b'-') => {
                sc.bump();
                negative = true;
            }
            Some(c) => {
                return Err(ParseError::new(
                    sc.pos,
                    format!("unexpected character '{}'", c as char),
                ));
            }
        }
    }

    let n = num_vars.unwrap_or(max_var.max(1));
    let mut poly = Polynomial::zero(n);
    for (factors, coeff) in terms {
        let mut exps = vec![0u32; n];
        for (var, e) in factors {
            exps[var - 1] = exps[var - 1].saturating_add(e);
        }
        poly = poly
            .add(&Polynomial::monomial(n, MultiIndex::new(exps), coeff))
            .expect("same arity");
    }
    Ok(poly)
}

fn parse_term(
    sc: &mut Scanner<'_>,
    num_vars: Option<usize>,
    max_var: &mut usize,
) -> Result<(Vec<(usize, u32)>, BigRational), ParseError> {
    let mut coeff = BigRational::one();
    let mut saw_anything = false;

    if matches!(sc.peek(), Some(c) if c.is_ascii_digit()) {
        let numer = sc.expect_uint("integer")?;
        let coeff_pos = sc.pos;
        if sc.eat(b'/') {
            let denom = sc.expect_uint("denominator")?;
            if denom.is_zero() {
                return Err(ParseError::new(coeff_pos, "zero denominator"));
            }
            coeff = BigRational::new(numer, denom);
        } else {
            coeff = BigRational::from_integer(numer);
        }
        saw_anything = true;
    }

    let mut factors = Vec::new();
    while matches!(sc.peek(), Some(b'x')) {
        sc.bump();
        let idx_pos = sc.pos;
        let idx = sc.expect_uint("variable index")?;
        let idx: usize = idx
            .try_into()
            .map_err(|_| ParseError::new(idx_pos, "variable index too large"))?;
        if idx == 0 {
            return Err(ParseError::new(idx_pos, "variable indices start at 1"));
        }
        if let Some(n) = num_vars {
            if idx > n {
                return Err(ParseError::new(
                    idx_pos,
                    format!("variable x{idx} exceeds the {n}-variable context"),
                ));
            }
        }
        *max_var = (*max_var).max(idx);
        let mut exp = 1u32;
        if sc.eat(b'^') {
            let exp_pos = sc.pos;
            if sc.eat(b'-') {
                return Err(ParseError::new(
                    exp_pos,
                    "negative exponents are not allowed",
                ));
            }
            let e = sc.expect_uint("exponent")?;
            exp = e
                .try_into()
                .map_err(|_| ParseError::new(exp_pos, "exponent too large"))?;
        }
        factors.push((idx, exp));
        saw_anything = true;
    }

    if !saw_anything {
        return Err(ParseError::new(sc.pos, "expected a term"));
    }
    Ok((factors, coeff))
}

/// Parse a bare monomial such as `x1^2 x2`, with implicit coefficient 1.
pub fn parse_monomial(text: &str, num_vars: usize) -> Result<MultiIndex, ParseError> {
    let poly = parse_polynomial(text, Some(num_vars))?;
    let mut terms = poly.terms();
    match (terms.next(), terms.next()) {
        (Some((mi, c)), None) if c.is_one() => Ok(mi.clone()),
        _ => Err(ParseError::new(
            0,
            "expected a single monomial with coefficient 1",
        )),
    }
}

/// Parse a rational number written as `a` or `a/b`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let mut sc = Scanner::new(text);
    let negative = sc.eat(b'-');
    let numer = sc.expect_uint("integer")?;
    let pos = sc.pos;
    let value = if sc.eat(b'/') {
        let denom = sc.expect_uint("denominator")?;
        if denom.is_zero() {
            return Err(ParseError::new(pos, "zero denominator"));
        }
        BigRational::new(numer, denom)
    } else {
        BigRational::from_integer(numer)
    };
    if sc.peek().is_some() {
        return Err(ParseError::new(sc.pos, "trailing input"));
    }
    Ok(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn parses_two_variable_canonical_form() {
        let f = parse_polynomial("x1^3 + 3 x1 x2 + x2^3", None).unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.rank(), 3);
        assert_eq!(
            f.coeff(&MultiIndex::new(vec![1, 1])),
            Some(&BigRational::from_integer(BigInt::from(3)))
        );
    }

    #[test]
    fn parses_rational_coefficient() {
        let f = parse_polynomial("1/2 x1^6", None).unwrap();
        assert_eq!(f.rank(), 1);
        assert_eq!(
            f.coeff(&MultiIndex::new(vec![6])),
            Some(&BigRational::new(BigInt::from(1), BigInt::from(2)))
        );
    }

    #[test]
    fn rejects_negative_exponent() {
        let err = parse_polynomial("x1^-2", None).unwrap_err();
        assert!(err.message.contains("negative exponent"), "{err}");
        assert_eq!(err.position, 3);
    }

    #[test]
    fn rejects_zero_index_and_garbage() {
        assert!(parse_polynomial("x0", None).is_err());
        assert!(parse_polynomial("", None).is_err());
        assert!(parse_polynomial("x1 * x2", None).is_err());
        assert!(parse_polynomial("3 4", None).is_err());
    }

    #[test]
    fn signed_terms_and_padding() {
        let f = parse_polynomial("-x1 + 2 x2 - 3", Some(3)).unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.rank(), 3);
        assert!(parse_polynomial("x3", Some(2)).is_err());
    }

    #[test]
    fn like_terms_combine() {
        let f = parse_polynomial("x1 + x1", None).unwrap();
        assert_eq!(
            f.coeff(&MultiIndex::new(vec![1])),
            Some(&BigRational::from_integer(BigInt::from(2)))
        );
        let g = parse_polynomial("x1 - x1", None).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn monomial_and_rational_helpers() {
        assert_eq!(
            parse_monomial("x1^2 x2", 3).unwrap(),
            MultiIndex::new(vec![2, 1, 0])
        );
        assert!(parse_monomial("2 x1", 2).is_err());
        assert_eq!(
            parse_rational("1/2").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert!(parse_rational("1/0").is_err());
    }
}
