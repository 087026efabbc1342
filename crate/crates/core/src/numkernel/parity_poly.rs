//! Polynomials whose terms all share one parity.
//!
//! Storage is dense in the half-index `m`: an odd polynomial keeps the
//! coefficient of `x^(2m+1)` at slot `m`, an even one keeps `x^(2m)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn offset(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of_exponent(e: u32) -> Parity {
        if e.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn product(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One `(exponent, coefficient)` pair, the wire form of a polynomial term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub power: u32,
    pub value: Scalar,
}

#[derive(Clone)]
pub struct ParityPolynomial {
    parity: Parity,
    coeffs: Vec<Scalar>,
    digits: u32,
}

impl ParityPolynomial {
    pub fn zero(parity: Parity, digits: u32) -> Self {
        ParityPolynomial {
            parity,
            coeffs: Vec::new(),
            digits,
        }
    }

    /// Dense constructor: `coeffs[m]` multiplies `x^(2m)` or `x^(2m+1)`.
    pub fn from_coeffs(parity: Parity, coeffs: Vec<Scalar>, digits: u32) -> Self {
        ParityPolynomial {
            parity,
            coeffs,
            digits,
        }
    }

    pub fn from_terms(parity: Parity, terms: &[Term], digits: u32) -> Result<Self> {
        let mut p = Self::zero(parity, digits);
        for t in terms {
            p.set(t.power, t.value.clone())?;
        }
        Ok(p)
    }

    pub fn monomial(exponent: u32, c: Scalar) -> Self {
        let digits = c.digits();
        let mut p = Self::zero(Parity::of_exponent(exponent), digits);
        p.set(exponent, c).expect("parity matches by construction");
        p
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Dense half-indexed coefficients.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn exponent_of(&self, m: usize) -> u32 {
        2 * m as u32 + self.parity.offset()
    }

    fn index_of(&self, exponent: u32) -> Option<usize> {
        (Parity::of_exponent(exponent) == self.parity).then_some((exponent / 2) as usize)
    }

    /// Coefficient of `x^exponent`; zero for absent or wrong-parity powers.
    pub fn coeff(&self, exponent: u32) -> Scalar {
        self.index_of(exponent)
            .and_then(|m| self.coeffs.get(m).cloned())
            .unwrap_or_else(|| Scalar::zero(self.digits))
    }

    pub fn set(&mut self, exponent: u32, c: Scalar) -> Result<()> {
        let m = self.index_of(exponent).ok_or_else(|| {
            Error::InvalidInput(format!(
                "exponent {exponent} does not match {:?} parity",
                self.parity
            ))
        })?;
        if self.coeffs.len() <= m {
            self.coeffs.resize(m + 1, Scalar::zero(self.digits));
        }
        self.coeffs[m] = c;
        Ok(())
    }

    /// Largest exponent with a nonzero coefficient; `None` marks the zero
    /// polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|m| self.exponent_of(m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Stored `(exponent, coefficient)` pairs, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(m, c)| (self.exponent_of(m), c))
    }

    pub fn nonzero_terms(&self) -> Vec<Term> {
        self.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(power, value)| Term {
                power,
                value: value.clone(),
            })
            .collect()
    }

    pub fn max_abs_coeff(&self) -> Scalar {
        self.coeffs
            .iter()
            .map(Scalar::abs)
            .fold(Scalar::zero(self.digits), |a, b| if b > a { b } else { a })
    }

    pub fn mul(&self, other: &ParityPolynomial) -> ParityPolynomial {
        let parity = self.parity.product(other.parity);
        let digits = self.digits.max(other.digits);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(parity, digits);
        }
        // (2i+a) + (2j+b) = 2(i+j) + a + b; odd*odd carries one into m.
        let carry = usize::from(self.parity == Parity::Odd && other.parity == Parity::Odd);
        let mut out = vec![Scalar::zero(digits); self.coeffs.len() + other.coeffs.len() - 1 + carry];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j + carry] += a * b;
            }
        }
        Self::from_coeffs(parity, out, digits)
    }

    pub fn diff(&self) -> ParityPolynomial {
        let parity = self.parity.flip();
        let coeffs = match self.parity {
            // (2m+1) x^(2m) stays at slot m
            Parity::Odd => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c.mul_int(2 * m as i64 + 1))
                .collect(),
            // 2m x^(2m-1) moves to slot m-1
            Parity::Even => self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, c)| c.mul_int(2 * m as i64))
                .collect(),
        };
        Self::from_coeffs(parity, coeffs, self.digits)
    }

    /// Term-wise antiderivative with zero constant of integration.
    pub fn antiderivative(&self) -> ParityPolynomial {
        let parity = self.parity.flip();
        let coeffs = match self.parity {
            Parity::Odd => std::iter::once(Scalar::zero(self.digits))
                .chain(
                    self.coeffs
                        .iter()
                        .enumerate()
                        .map(|(m, c)| c.div_int(2 * m as i64 + 2)),
                )
                .collect(),
            Parity::Even => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c.div_int(2 * m as i64 + 1))
                .collect(),
        };
        Self::from_coeffs(parity, coeffs, self.digits)
    }

    /// Horner evaluation in `x^2`.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let x2 = x * x;
        let mut acc = Scalar::zero(self.digits.max(x.digits()));
        for c in self.coeffs.iter().rev() {
            acc = &acc * &x2 + c;
        }
        match self.parity {
            Parity::Even => acc,
            Parity::Odd => acc * x,
        }
    }

    pub fn scale(&self, k: &Scalar) -> ParityPolynomial {
        Self::from_coeffs(
            self.parity,
            self.coeffs.iter().map(|c| c * k).collect(),
            self.digits,
        )
    }

    /// Keeps only exponents in `lo..=hi`.
    pub fn band(&self, lo: u32, hi: u32) -> ParityPolynomial {
        let mut out = Self::zero(self.parity, self.digits);
        for (e, c) in self.iter() {
            if e >= lo && e <= hi && !c.is_zero() {
                out.set(e, c.clone()).expect("same parity");
            }
        }
        out
    }

    fn zip_with(&self, other: &ParityPolynomial, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> ParityPolynomial {
        assert_eq!(
            self.parity, other.parity,
            "cannot combine polynomials of different parity"
        );
        let digits = self.digits.max(other.digits);
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Scalar::zero(digits);
        let coeffs = (0..n)
            .map(|m| {
                f(
                    self.coeffs.get(m).unwrap_or(&zero),
                    other.coeffs.get(m).unwrap_or(&zero),
                )
            })
            .collect();
        Self::from_coeffs(self.parity, coeffs, digits)
    }
}

/// Equal when parity and every coefficient agree; trailing zero slots are
/// ignored.
impl PartialEq for ParityPolynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.parity != other.parity {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|m| match (self.coeffs.get(m), other.coeffs.get(m)) {
            (Some(a), Some(b)) => a == b,
            (Some(c), None) | (None, Some(c)) => c.is_zero(),
            (None, None) => true,
        })
    }
}

impl Add<&ParityPolynomial> for &ParityPolynomial {
    type Output = ParityPolynomial;
    fn add(self, rhs: &ParityPolynomial) -> ParityPolynomial {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub<&ParityPolynomial> for &ParityPolynomial {
    type Output = ParityPolynomial;
    fn sub(self, rhs: &ParityPolynomial) -> ParityPolynomial {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<&ParityPolynomial> for &ParityPolynomial {
    type Output = ParityPolynomial;
    fn mul(self, rhs: &ParityPolynomial) -> ParityPolynomial {
        ParityPolynomial::mul(self, rhs)
    }
}

impl Neg for &ParityPolynomial {
    type Output = ParityPolynomial;
    fn neg(self) -> ParityPolynomial {
        ParityPolynomial::from_coeffs(
            self.parity,
            self.coeffs.iter().map(|c| -c).collect(),
            self.digits,
        )
    }
}

impl fmt::Debug for ParityPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.parity)?;
        let mut first = true;
        for (e, c) in self.iter().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}) x^{e}", c.to_sig_string(12))?;
        }
        write!(f, "]")
    }
}
