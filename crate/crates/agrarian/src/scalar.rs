//! The coefficient field ℚ(i).

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A Gaussian rational `re + im·i` with both parts in lowest terms.
///
/// `num::BigRational` keeps denominators positive and reduced, so the field
/// axioms hold exactly and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        GaussianRational { re: BigRational::one(), im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared absolute value `re² + im²` (a nonnegative rational).
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Parses the scalar grammar `rational | rational ('+'|'-') rational 'i' | rational 'i'`
    /// with `rational := ['-'] digits ['/' digits]`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::parse(0, "empty scalar"));
        }
        let bytes = s.as_bytes();
        let mut pos = 0usize;

        fn parse_rational(bytes: &[u8], pos: &mut usize) -> Result<BigRational> {
            let start = *pos;
            let mut neg = false;
            if *pos < bytes.len() && (bytes[*pos] == b'-' || bytes[*pos] == b'+') {
                neg = bytes[*pos] == b'-';
                *pos += 1;
            }
            let digits_start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == digits_start {
                return Err(Error::parse(start, "expected digits"));
            }
            let numer: BigInt = std::str::from_utf8(&bytes[digits_start..*pos])
                .unwrap()
                .parse()
                .map_err(|_| Error::parse(digits_start, "bad integer"))?;
            let mut denom = BigInt::one();
            if *pos < bytes.len() && bytes[*pos] == b'/' {
                *pos += 1;
                let den_start = *pos;
                while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                if *pos == den_start {
                    return Err(Error::parse(den_start, "expected denominator digits"));
                }
                denom = std::str::from_utf8(&bytes[den_start..*pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::parse(den_start, "bad denominator"))?;
                if denom.is_zero() {
                    return Err(Error::parse(den_start, "zero denominator"));
                }
            }
            let mut r = BigRational::new(numer, denom);
            if neg {
                r = -r;
            }
            Ok(r)
        }

        let first = parse_rational(bytes, &mut pos)?;
        if pos == bytes.len() {
            return Ok(GaussianRational { re: first, im: BigRational::zero() });
        }
        // pure imaginary like "3/2i" or "-1i"
        if bytes[pos] == b'i' && pos + 1 == bytes.len() {
            return Ok(GaussianRational { re: BigRational::zero(), im: first });
        }
        if bytes[pos] != b'+' && bytes[pos] != b'-' {
            return Err(Error::parse(pos, "expected '+', '-' or 'i'"));
        }
        let second = parse_rational(bytes, &mut pos)?;
        if pos < bytes.len() && bytes[pos] == b'i' && pos + 1 == bytes.len() {
            Ok(GaussianRational { re: first, im: second })
        } else {
            Err(Error::parse(pos, "expected trailing 'i'"))
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussianRational {
        GaussianRational::from_parts(re_n, re_d, im_n, im_d)
    }

    #[test]
    fn field_basics() {
        let a = g(1, 2, 3, 1);
        let b = g(-2, 3, 0, 1);
        assert_eq!(&(&a + &b) - &b, a);
        let prod = &a * &b;
        assert_eq!(&prod / &b, a);
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn inverse_of_i() {
        let i = GaussianRational::i();
        assert_eq!(i.inv().unwrap(), -GaussianRational::i());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3/2+1/2i", "-1", "0", "2i", "-3/4i", "-1-1i", "5-2/7i"] {
            let v = GaussianRational::parse(s).unwrap();
            let shown = v.to_string();
            assert_eq!(GaussianRational::parse(&shown).unwrap(), v, "{s} -> {shown}");
        }
        assert_eq!(GaussianRational::parse("3/2+1/2i").unwrap(), g(3, 2, 1, 2));
        assert_eq!(GaussianRational::parse("2i").unwrap(), g(0, 1, 2, 1));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(GaussianRational::parse("").is_err());
        assert!(GaussianRational::parse("1/0").is_err());
        assert!(GaussianRational::parse("1+2").is_err());
        assert!(GaussianRational::parse("i").is_err());
        assert!(GaussianRational::parse("1.5").is_err());
    }
}
