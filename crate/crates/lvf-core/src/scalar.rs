//! Exact scalar types: big rationals, Gaussian rationals, and π-graded
//! rationals. All arithmetic is arbitrary precision; nothing here rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot add pi-graded scalars of different grades ({0} vs {1})")]
    MixedPiGrades(u8, u8),
    #[error("pi grade {0} exceeds the representable range {{0,1}}")]
    PiGradeOverflow(u8),
}

/// Error from parsing a scalar out of its canonical text form.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal {literal:?}: {reason}")]
pub struct ParseScalarError {
    pub literal: String,
    pub reason: String,
}

fn parse_err(literal: &str, reason: &str) -> ParseScalarError {
    ParseScalarError { literal: literal.to_string(), reason: reason.to_string() }
}

/// Arbitrary-precision rational, kept in lowest terms with a positive
/// denominator (both guaranteed by the backing representation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `num/den`, reducing to lowest terms. Fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational outside f64 range")
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! forward_binop {
    ($ty:ty, $trait:ident, $method:ident, $op:tt) => {
        impl $trait for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self) $op (&rhs)
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self) $op rhs
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self $op (&rhs)
            }
        }
    };
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}
impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}
impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}
forward_binop!(Rational, Add, add, +);
forward_binop!(Rational, Sub, sub, -);
forward_binop!(Rational, Mul, mul, *);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

/// Division panics on zero divisors; use [`Rational::checked_div`] where the
/// divisor is data-dependent.
impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs).expect("division by zero")
    }
}
forward_binop!(Rational, Div, div, /);

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (num_str, den_str) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt =
            num_str.parse().map_err(|_| parse_err(s, "numerator is not an integer"))?;
        let den: BigInt =
            den_str.parse().map_err(|_| parse_err(s, "denominator is not an integer"))?;
        Rational::from_big(num, den).map_err(|_| parse_err(s, "zero denominator"))
    }
}

/// Gaussian rational `re + im·i`. The coefficient field for every exact
/// calculus in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GScalar {
    pub re: Rational,
    pub im: Rational,
}

impl GScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        GScalar { re, im }
    }

    pub fn zero() -> Self {
        GScalar::default()
    }

    pub fn one() -> Self {
        GScalar { re: Rational::one(), im: Rational::zero() }
    }

    pub fn i() -> Self {
        GScalar { re: Rational::zero(), im: Rational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GScalar { re: Rational::from_int(n), im: Rational::zero() }
    }

    pub fn from_rational(re: Rational) -> Self {
        GScalar { re, im: Rational::zero() }
    }

    /// `(num/den)`, real. Fails on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        Ok(GScalar::from_rational(Rational::new(num, den)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GScalar { re: self.re.clone(), im: -&self.im }
    }

    /// `re² + im²`, an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn checked_inv(&self) -> Result<GScalar, ScalarError> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let c = self.conj();
        Ok(GScalar { re: c.re.checked_div(&n)?, im: c.im.checked_div(&n)? })
    }

    pub fn checked_div(&self, rhs: &GScalar) -> Result<GScalar, ScalarError> {
        Ok(self * &rhs.checked_inv()?)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl From<i64> for GScalar {
    fn from(n: i64) -> Self {
        GScalar::from_int(n)
    }
}

impl From<Rational> for GScalar {
    fn from(r: Rational) -> Self {
        GScalar::from_rational(r)
    }
}

impl Add for &GScalar {
    type Output = GScalar;
    fn add(self, rhs: &GScalar) -> GScalar {
        GScalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}
impl Sub for &GScalar {
    type Output = GScalar;
    fn sub(self, rhs: &GScalar) -> GScalar {
        GScalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}
impl Mul for &GScalar {
    type Output = GScalar;
    fn mul(self, rhs: &GScalar) -> GScalar {
        GScalar {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}
forward_binop!(GScalar, Add, add, +);
forward_binop!(GScalar, Sub, sub, -);
forward_binop!(GScalar, Mul, mul, *);

impl Neg for &GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        GScalar { re: -&self.re, im: -&self.im }
    }
}
impl Neg for GScalar {
    type Output = GScalar;
    fn neg(self) -> GScalar {
        -&self
    }
}

impl AddAssign<&GScalar> for GScalar {
    fn add_assign(&mut self, rhs: &GScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl fmt::Display for GScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag(f: &mut fmt::Formatter<'_>, im: &Rational) -> fmt::Result {
            if im.is_one() {
                write!(f, "i")
            } else if (-im).is_one() {
                write!(f, "-i")
            } else {
                write!(f, "{im}i")
            }
        }
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            imag(f, &self.im)
        } else {
            write!(f, "{}", self.re)?;
            if !self.im.is_negative() {
                write!(f, "+")?;
            }
            imag(f, &self.im)
        }
    }
}

impl FromStr for GScalar {
    type Err = ParseScalarError;

    /// Accepts the forms produced by `Display`: `3`, `-3/2`, `i`, `-i`,
    /// `2i`, `1/2i`, `1+2i`, `-1-i`, `1+1/2i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(parse_err(s, "empty literal"));
        }
        // Split off a trailing imaginary part if present.
        if let Some(body) = t.strip_suffix('i') {
            // Find the split point between real and imaginary summands: a
            // '+'/'-' not in the leading position and not following '/'.
            let bytes = body.as_bytes();
            let mut split = None;
            for (pos, b) in bytes.iter().enumerate().skip(1) {
                if (*b == b'+' || *b == b'-') && bytes[pos - 1] != b'/' {
                    split = Some(pos);
                }
            }
            let (re_str, im_str) = match split {
                Some(pos) => (&body[..pos], &body[pos..]),
                None => ("0", body),
            };
            let re: Rational = re_str.parse()?;
            let im: Rational = match im_str {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                other => other.parse()?,
            };
            Ok(GScalar { re, im })
        } else {
            Ok(GScalar::from_rational(t.parse()?))
        }
    }
}

/// Rational multiple of π^k with k ∈ {0, 1}. Addition across different
/// grades is rejected: the two grades span independent ℚ-lines and the
/// providers that use this type never need mixed sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiScalar {
    pub coeff: Rational,
    pub grade: u8,
}

impl PiScalar {
    pub fn zero() -> Self {
        PiScalar { coeff: Rational::zero(), grade: 0 }
    }

    pub fn rational(coeff: Rational) -> Self {
        PiScalar { coeff, grade: 0 }
    }

    /// `coeff · π`.
    pub fn pi_multiple(coeff: Rational) -> Self {
        PiScalar { coeff, grade: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn checked_add(&self, rhs: &PiScalar) -> Result<PiScalar, ScalarError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.grade != rhs.grade {
            return Err(ScalarError::MixedPiGrades(self.grade, rhs.grade));
        }
        Ok(PiScalar { coeff: &self.coeff + &rhs.coeff, grade: self.grade })
    }

    pub fn checked_mul(&self, rhs: &PiScalar) -> Result<PiScalar, ScalarError> {
        let grade = self.grade + rhs.grade;
        if grade > 1 && !self.is_zero() && !rhs.is_zero() {
            return Err(ScalarError::PiGradeOverflow(grade));
        }
        Ok(PiScalar { coeff: &self.coeff * &rhs.coeff, grade: grade.min(1) })
    }

    pub fn neg(&self) -> PiScalar {
        PiScalar { coeff: -&self.coeff, grade: self.grade }
    }

    pub fn to_f64(&self) -> f64 {
        let base = self.coeff.to_f64();
        if self.grade == 1 {
            base * std::f64::consts::PI
        } else {
            base
        }
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grade == 0 || self.coeff.is_zero() {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "pi")
        } else if (-&self.coeff).is_one() {
            write!(f, "-pi")
        } else {
            write!(f, "({})pi", self.coeff)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rational_lowest_terms_and_sign() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
    }

    #[test]
    fn rational_division_by_zero_is_an_error() {
        assert_eq!(Rational::new(1, 0), Err(ScalarError::DivisionByZero));
        assert_eq!(
            rat(1, 2).checked_div(&Rational::zero()),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn rational_display_round_trip() {
        for s in ["0", "5", "-5", "3/2", "-3/2", "22/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
    }

    #[test]
    fn gscalar_conjugate_and_norm() {
        let z = GScalar::new(rat(1, 1), rat(2, 1));
        assert_eq!(z.conj(), GScalar::new(rat(1, 1), rat(-2, 1)));
        assert_eq!(z.norm_sqr(), rat(5, 1));
        assert_eq!(&z * &z.checked_inv().unwrap(), GScalar::one());
    }

    #[test]
    fn gscalar_display_round_trip() {
        for s in ["0", "3", "-3/2", "i", "-i", "2i", "1/2i", "1+2i", "-1-i", "1+1/2i", "2-3/4i"] {
            let z: GScalar = s.parse().unwrap();
            assert_eq!(z.to_string(), s, "round-trip of {s}");
        }
    }

    #[test]
    fn pi_scalar_grade_rules() {
        let a = PiScalar::pi_multiple(rat(4, 3));
        let b = PiScalar::pi_multiple(rat(-1, 3));
        assert_eq!(a.checked_add(&b).unwrap(), PiScalar::pi_multiple(rat(1, 1)));
        let plain = PiScalar::rational(rat(1, 1));
        assert_eq!(
            a.checked_add(&plain),
            Err(ScalarError::MixedPiGrades(1, 0))
        );
        assert_eq!(a.checked_mul(&b), Err(ScalarError::PiGradeOverflow(2)));
        assert_eq!(
            a.checked_mul(&plain).unwrap(),
            PiScalar::pi_multiple(rat(4, 3))
        );
        assert_eq!(PiScalar::pi_multiple(rat(-1, 1)).to_string(), "-pi");
        assert_eq!(PiScalar::pi_multiple(rat(-8, 3)).to_string(), "(-8/3)pi");
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-50i64..=50, 1i64..=20).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_gscalar() -> impl Strategy<Value = GScalar> {
        (arb_rational(), arb_rational()).prop_map(|(re, im)| GScalar::new(re, im))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in arb_rational(), b in arb_rational(), c in arb_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn gscalar_field_axioms(a in arb_gscalar(), b in arb_gscalar(), c in arb_gscalar()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.checked_inv().unwrap(), GScalar::one());
            }
        }

        #[test]
        fn gscalar_text_round_trip(a in arb_gscalar()) {
            let printed = a.to_string();
            let parsed: GScalar = printed.parse().unwrap();
            prop_assert_eq!(parsed, a);
        }
    }
}
