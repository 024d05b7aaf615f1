//! Real scalar types the operator machinery is generic over.
//!
//! Every matrix entry is a `Complex<R>`. `R = f64` (or `f32`) is the
//! floating-point path; `R = BigRational` is the exact path used to show that
//! an identity residual is literally zero.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Exact complex rational, the storage type for user-supplied coefficients.
pub type CRational = Complex<BigRational>;

pub trait Real:
    Clone + Debug + PartialEq + Send + Sync + Num + Neg<Output = Self> + 'static
{
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    /// Lift a value that is only known in floating point (a logarithm, say).
    /// Exact scalars cannot represent it and return `None`.
    fn from_f64_inexact(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self;

    fn ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p) / Self::from_i64(q)
    }
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn from_f64_inexact(x: f64) -> Option<Self> {
        Some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }
}

impl Real for f32 {
    const EXACT: bool = false;

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f32(r).unwrap_or(f32::NAN)
    }

    fn from_f64_inexact(x: f64) -> Option<Self> {
        Some(x as f32)
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn from_i64(n: i64) -> Self {
        n as f32
    }
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64_inexact(_x: f64) -> Option<Self> {
        None
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(p: i64, q: i64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }
}

pub fn cx<R: Real>(re: R) -> Complex<R> {
    Complex::new(re, R::zero())
}

pub fn cx_ratio<R: Real>(p: i64, q: i64) -> Complex<R> {
    Complex::new(R::ratio(p, q), R::zero())
}

pub fn lift<R: Real>(z: &CRational) -> Complex<R> {
    Complex::new(R::from_rational(&z.re), R::from_rational(&z.im))
}

pub fn to_c64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn norm_f64<R: Real>(z: &Complex<R>) -> f64 {
    to_c64(z).norm()
}

/// Exact conversion of a double into a rational (every finite double is dyadic).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(BigRational::new(p, q))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Some(BigRational::from_integer(n))
    } else {
        s.parse::<f64>().ok().and_then(rational_from_f64)
    }
}

pub fn crational_is_real(z: &CRational) -> bool {
    z.im.is_zero()
}

pub fn crational_abs_sqr_f64(z: &CRational) -> f64 {
    let n = &z.re * &z.re + &z.im * &z.im;
    ToPrimitive::to_f64(&n.abs()).unwrap_or(f64::NAN)
}
