//! Configurable-precision real numbers.
//!
//! A [`Scalar`] carries its precision as a count of significant decimal
//! digits. The binary working precision is the digit count converted to bits
//! and rounded up to whole 64-bit words, so every value has a few guard
//! digits beyond what it promises.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Number of mantissa bits used for `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    let raw = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize;
    raw.div_ceil(WORD_BITS).max(1) * WORD_BITS
}

/// A real number at a stated decimal precision.
#[derive(Clone)]
pub struct Scalar {
    value: BigFloat,
    digits: u32,
}

impl Scalar {
    fn wrap(value: BigFloat, digits: u32) -> Self {
        Scalar { value, digits }
    }

    fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_int(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_int(1, digits)
    }

    pub fn from_int(v: i64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits_for_digits(digits)), digits)
    }

    pub fn from_u128(v: u128, digits: u32) -> Self {
        Self::wrap(BigFloat::from_u128(v, bits_for_digits(digits)), digits)
    }

    /// `num / den`, correctly rounded.
    pub fn from_ratio(num: i64, den: i64, digits: u32) -> Self {
        Self::from_int(num, digits) / Self::from_int(den, digits)
    }

    /// Nearest value to a binary double. Only meant for coarse inputs such as
    /// plot coordinates and CLI scale hints.
    pub fn from_f64(v: f64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_f64(v, bits_for_digits(digits)), digits)
    }

    /// Parses a decimal string (plain or scientific notation).
    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars()
                .all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'));
        if !ok {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let p = bits_for_digits(digits);
        // Parse one word wider and round once, mirroring `to_decimal`.
        let mut v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, p + WORD_BITS, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {s:?}")));
        }
        v.set_precision(p, RM)
            .map_err(|e| Error::Parse(format!("{e:?}")))?;
        Ok(Self::wrap(v, digits))
    }

    /// Decimal string that parses back to exactly this value at this precision.
    pub fn to_decimal(&self) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        let mut w = self.value.clone();
        w.set_precision(self.bits() + WORD_BITS, RM)
            .expect("widening never fails");
        let s = with_consts(|cc| w.format(Radix::Dec, RM, cc)).expect("finite value formats");
        tidy_scientific(&s)
    }

    /// Rounded to `sig` significant digits, in scientific notation.
    pub fn to_sig_string(&self, sig: usize) -> String {
        format_sig(&self.to_decimal(), sig)
    }

    /// Coarse conversion for plotting and logging.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).expect("finite value formats");
        tidy_scientific(&s).parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Same value, re-rounded to a different decimal precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        let mut v = self.value.clone();
        v.set_precision(bits_for_digits(digits), RM)
            .expect("precision change on a finite value");
        Self::wrap(v, digits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.value.is_zero() && self.value.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.value.is_zero() && self.value.is_positive()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.digits)
    }

    pub fn signum(&self) -> i32 {
        if self.value.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn max_abs<'a>(a: &'a Scalar, b: &'a Scalar) -> &'a Scalar {
        if a.abs() >= b.abs() {
            a
        } else {
            b
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self * &Scalar::from_int(k, self.digits)
    }

    pub fn div_int(&self, k: i64) -> Self {
        self / &Scalar::from_int(k, self.digits)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.value.powi(n, self.bits(), RM), self.digits)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        Ok(Self::wrap(self.value.sqrt(self.bits(), RM), self.digits))
    }

    /// Real `k`-th root. Negative arguments are allowed for odd `k`.
    pub fn root(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        if self.is_zero() || k == 1 {
            return Ok(self.clone());
        }
        if self.is_negative() {
            if k.is_multiple_of(2) {
                return Err(Error::Domain("even root of a negative number".into()));
            }
            return Ok(-(self.abs().root(k)?));
        }
        let p = self.bits();
        let v = match k {
            2 => self.value.sqrt(p, RM),
            3 => self.value.cbrt(p, RM),
            _ => {
                let wide = p + 2 * WORD_BITS;
                let kk = BigFloat::from_u32(k, wide);
                let mut r = with_consts(|cc| {
                    let l = self.value.ln(wide, RM, cc).div(&kk, wide, RM);
                    l.exp(wide, RM, cc)
                });
                r.set_precision(p, RM).expect("narrowing a finite value");
                r
            }
        };
        Ok(Self::wrap(v, self.digits))
    }

    pub fn exp(&self) -> Self {
        let p = self.bits();
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), self.digits)
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let p = self.bits();
        Ok(Self::wrap(with_consts(|cc| self.value.ln(p, RM, cc)), self.digits))
    }

    pub fn log10(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let p = self.bits();
        Ok(Self::wrap(with_consts(|cc| self.value.log10(p, RM, cc)), self.digits))
    }

    /// `self^e` for positive `self` and real `e`.
    pub fn powf(&self, e: &Scalar) -> Result<Self> {
        if e.is_zero() {
            return Ok(Scalar::one(self.digits));
        }
        let l = self.ln()?;
        Ok((&l * e).exp())
    }

    /// `10^k`.
    pub fn pow10(k: i32, digits: u32) -> Self {
        let ten = Scalar::from_int(10, digits);
        let m = ten.powi(k.unsigned_abs() as usize);
        if k >= 0 {
            m
        } else {
            Scalar::one(digits) / m
        }
    }

    /// Relative distance `|a - b| / max(|a|, |b|)`, or `|a - b|` when both
    /// vanish to that degree.
    pub fn rel_diff(a: &Scalar, b: &Scalar) -> Scalar {
        let d = (a - b).abs();
        let m = Scalar::max_abs(a, b).abs();
        if m.is_zero() {
            d
        } else {
            d / m
        }
    }

    fn digits_with(&self, other: &Scalar) -> u32 {
        self.digits.max(other.digits)
    }
}

/// Normalizes the formatter's output (`-3.e+0`, `1.25e-4`) into
/// `-3e0`/`1.25e-4` form, keeping every mantissa digit.
fn tidy_scientific(s: &str) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, "0"),
    };
    let mant = mant.trim_end_matches('.');
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    if exp == 0 {
        mant.to_string()
    } else {
        format!("{mant}e{exp}")
    }
}

/// Rounds a scientific decimal string to `sig` significant digits.
fn format_sig(s: &str, sig: usize) -> String {
    let sig = sig.max(1);
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.find('e') {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let mut all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // decimal exponent of the first digit
    let lead = all.iter().position(|&d| d != 0);
    let Some(lead) = lead else {
        return "0".to_string();
    };
    let mut e10 = exp + int_part.len() as i64 - 1 - lead as i64;
    all.drain(..lead);
    all.resize(all.len().max(sig + 1), 0);
    let round_up = all[sig] >= 5;
    all.truncate(sig);
    if round_up {
        let mut i = sig;
        loop {
            if i == 0 {
                all.insert(0, 1);
                all.truncate(sig);
                e10 += 1;
                break;
            }
            i -= 1;
            if all[i] == 9 {
                all[i] = 0;
            } else {
                all[i] += 1;
                break;
            }
        }
    }
    let digits: String = all.iter().map(|d| char::from(b'0' + d)).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&digits[..1]);
    if sig > 1 {
        out.push('.');
        out.push_str(&digits[1..]);
    }
    out.push_str(&format!("e{e10}"));
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(sig) => f.write_str(&self.to_sig_string(sig)),
            None => f.write_str(&self.to_decimal()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({}, {}d)", self.to_sig_string(24), self.digits)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_decimal())
    }
}

/// Deserializes at the default run precision; callers that know the run's
/// precision re-parse with [`Scalar::parse`].
impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Scalar::parse(&s, crate::DEFAULT_PRECISION).map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident, $op:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                let d = self.digits_with(rhs);
                Scalar::wrap(self.value.$op(&rhs.value, bits_for_digits(d), RM), d)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
        impl $atr<&Scalar> for Scalar {
            fn $am(&mut self, rhs: &Scalar) {
                *self = (&*self).$m(rhs);
            }
        }
        impl $atr<Scalar> for Scalar {
            fn $am(&mut self, rhs: Scalar) {
                *self = (&*self).$m(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add);
binop!(Sub, sub, SubAssign, sub_assign, sub);
binop!(Mul, mul, MulAssign, mul_assign, mul);
binop!(Div, div, DivAssign, div_assign, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::wrap(-&self.value, self.digits)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::wrap(-&self.value, self.digits)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(mut iter: I) -> Scalar {
        let first = iter.next().unwrap_or_else(|| Scalar::zero(crate::DEFAULT_PRECISION));
        iter.fold(first, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: u32 = 50;

    #[test]
    fn bits_are_whole_words() {
        assert_eq!(bits_for_digits(80), 320);
        assert_eq!(bits_for_digits(19), 64);
        assert_eq!(bits_for_digits(20), 128);
    }

    #[test]
    fn cube_root_of_twelve() {
        let c = Scalar::from_int(12, D).root(3).unwrap() / Scalar::from_int(2, D);
        assert!(c.to_decimal().starts_with("1.1447142425533318678080422119396770089159069"));
    }

    #[test]
    fn roots_via_logarithm() {
        let x = Scalar::from_ratio(45, 17, D);
        let r = x.root(4).unwrap();
        let back = r.powi(4);
        assert!(Scalar::rel_diff(&back, &x) < Scalar::pow10(2 - D as i32, D));
        let neg = Scalar::from_int(-27, D).root(3).unwrap();
        assert_eq!(neg, Scalar::from_int(-3, D));
        assert!(Scalar::from_int(-4, D).root(2).is_err());
    }

    #[test]
    fn decimal_forms() {
        assert_eq!(Scalar::from_int(-3, D).to_decimal(), "-3");
        assert_eq!(Scalar::zero(D).to_decimal(), "0");
        let x = Scalar::parse("0.000125", D).unwrap();
        assert_eq!(Scalar::parse(&x.to_decimal(), D).unwrap(), x);
        assert_eq!(Scalar::parse("0.5", D).unwrap().to_decimal(), "5e-1");
        assert_eq!(Scalar::parse("1.25e-4", D).unwrap(), Scalar::from_ratio(1, 8000, D));
        assert!(Scalar::parse("abc", D).is_err());
        assert!(Scalar::parse("", D).is_err());
    }

    #[test]
    fn significant_digit_rounding() {
        let x = Scalar::parse("1.06099633526211804464", D).unwrap();
        assert_eq!(x.to_sig_string(15), "1.06099633526212e0");
        assert_eq!(Scalar::parse("9.996", D).unwrap().to_sig_string(3), "1.00e1");
        assert_eq!(Scalar::parse("-3.897686103e-8", D).unwrap().to_sig_string(4), "-3.898e-8");
        assert_eq!(format!("{:.3}", Scalar::from_ratio(2, 3, D)), "6.67e-1");
    }

    #[test]
    fn logs_and_exp() {
        let x = Scalar::from_int(1000, D);
        assert!(Scalar::rel_diff(&x.log10().unwrap(), &Scalar::from_int(3, D)) < Scalar::pow10(-45, D));
        let e = Scalar::one(D).exp();
        assert!(e.to_decimal().starts_with("2.71828182845904523536028747135266249775724709369995"));
        assert!(Scalar::zero(D).ln().is_err());
    }

    #[test]
    fn mixed_precision_takes_the_wider() {
        let a = Scalar::from_ratio(1, 3, 20);
        let b = Scalar::from_ratio(1, 3, 60);
        assert_eq!((&a + &b).digits(), 60);
    }

    #[test]
    fn to_f64_is_close() {
        assert!((Scalar::from_ratio(1, 3, D).to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(Scalar::from_int(-5, D).to_f64(), -5.0);
    }
}
