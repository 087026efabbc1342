//! Dense univariate polynomials and real-root isolation.

use std::ops::{Add, Mul, Sub};

use super::Scalar;
use crate::error::{Error, Result};

/// `coeffs[i]` multiplies `t^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
    digits: u32,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Scalar>, digits: u32) -> Self {
        let mut p = Polynomial { coeffs, digits };
        p.trim();
        p
    }

    pub fn constant(c: Scalar) -> Self {
        let d = c.digits();
        Self::new(vec![c], d)
    }

    /// The identity polynomial `t`.
    pub fn variable(digits: u32) -> Self {
        Self::new(vec![Scalar::zero(digits), Scalar::one(digits)], digits)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.digits.max(t.digits()));
        for c in self.coeffs.iter().rev() {
            acc = &acc * t + c;
        }
        acc
    }

    /// `sum |a_i| |t|^i`, the magnitude scale of the terms at `t`.
    fn abs_eval(&self, t: &Scalar) -> Scalar {
        let ta = t.abs();
        let mut acc = Scalar::zero(self.digits);
        for c in self.coeffs.iter().rev() {
            acc = &acc * &ta + c.abs();
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_int(i as i64))
            .collect();
        Self::new(coeffs, self.digits)
    }

    pub fn scale(&self, k: &Scalar) -> Polynomial {
        Self::new(self.coeffs.iter().map(|c| c * k).collect(), self.digits)
    }

    /// Cauchy bound: every root satisfies `|t| < 1 + max |a_i / a_n|`.
    pub fn root_bound(&self) -> Option<Scalar> {
        let lead = self.coeffs.last()?;
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(Scalar::zero(self.digits), |a, b| if b > a { b } else { a });
        Some(m + Scalar::one(self.digits))
    }

    fn combine(&self, other: &Polynomial, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Polynomial {
        let digits = self.digits.max(other.digits);
        let zero = Scalar::zero(digits);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f(self.coeffs.get(i).unwrap_or(&zero), other.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        Self::new(coeffs, digits)
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let digits = self.digits.max(rhs.digits);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::new(Vec::new(), digits);
        }
        let mut out = vec![Scalar::zero(digits); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out, digits)
    }
}

/// All real roots of `coeffs[0] + coeffs[1] t + ...` in the open interval
/// `(lo, hi)`, sorted ascending and bisected to working precision.
///
/// Roots are assumed simple. The interval is split at the critical points
/// (found recursively from the derivative) so each piece is monotone and
/// holds at most one root. A critical point where the polynomial vanishes to
/// working precision is a multiple root and is reported as an isolation
/// failure.
pub fn real_roots(coeffs: &[Scalar], lo: &Scalar, hi: &Scalar) -> Result<Vec<Scalar>> {
    if lo >= hi {
        return Err(Error::InvalidInput("real_roots needs lo < hi".into()));
    }
    let digits = coeffs
        .iter()
        .map(Scalar::digits)
        .chain([lo.digits(), hi.digits()])
        .max()
        .unwrap_or(crate::DEFAULT_PRECISION);
    let q = Polynomial::new(coeffs.to_vec(), digits);
    if q.is_zero() {
        return Err(Error::InvalidInput(
            "real_roots needs at least one nonzero coefficient".into(),
        ));
    }
    roots_in(&q, lo, hi, true)
}

fn roots_in(q: &Polynomial, lo: &Scalar, hi: &Scalar, strict: bool) -> Result<Vec<Scalar>> {
    match q.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => {
            let r = -(&q.coeffs[0] / &q.coeffs[1]);
            return Ok(if &r > lo && &r < hi { vec![r] } else { Vec::new() });
        }
        _ => {}
    }
    let crit = roots_in(&q.derivative(), lo, hi, false)?;
    let tol = Scalar::pow10(5 - q.digits as i32, q.digits);

    let mut points = Vec::with_capacity(crit.len() + 2);
    points.push(lo.clone());
    points.extend(crit.iter().cloned());
    points.push(hi.clone());
    let values: Vec<Scalar> = points.iter().map(|t| q.eval(t)).collect();

    let mut roots = Vec::new();
    for (i, c) in crit.iter().enumerate() {
        let v = &values[i + 1];
        if v.abs() <= &tol * &q.abs_eval(c) {
            if strict {
                return Err(Error::RootIsolation(format!(
                    "polynomial and its derivative both vanish near {}",
                    c.to_sig_string(20)
                )));
            }
            roots.push((i + 1, c.clone()));
        }
    }
    for i in 0..points.len() - 1 {
        let (sa, sb) = (values[i].signum(), values[i + 1].signum());
        if sa * sb < 0 {
            roots.push((i, bisect(q, &points[i], &points[i + 1], sa)));
        }
    }
    roots.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite roots"));
    Ok(roots.into_iter().map(|(_, r)| r).collect())
}

/// Bisection on a bracket where `q(a)` has sign `sa` and `q(b)` the opposite.
fn bisect(q: &Polynomial, a: &Scalar, b: &Scalar, sa: i32) -> Scalar {
    let digits = q.digits;
    let half = Scalar::from_ratio(1, 2, digits);
    let bits = super::scalar::bits_for_digits(digits) as i32;
    let eps = Scalar::from_int(2, digits).powi(bits as usize);
    let (mut a, mut b) = (a.clone(), b.clone());
    // stops at a relative width of one ulp; the cap covers brackets that shrink toward zero
    for _ in 0..(bits + 256) {
        let mid = (&a + &b) * &half;
        if mid == a || mid == b {
            return mid;
        }
        let s = q.eval(&mid).signum();
        if s == 0 {
            return mid;
        }
        let done = (&b - &a) * &eps <= mid.abs() * Scalar::from_int(2, digits);
        if s == sa {
            a = mid;
        } else {
            b = mid;
        }
        if done {
            break;
        }
    }
    (&a + &b) * &half
}
