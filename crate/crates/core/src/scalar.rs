//! Coefficient fields: double-precision complex numbers and exact
//! cyclotomic numbers behind one trait.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::polar::ComplexValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// A coefficient field usable by every series operation.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + Sub<Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + Mul<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn to_c64(&self) -> Complex64;
    /// Exact embedding of a finite double (real axis).
    fn from_f64(x: f64) -> Self;
    /// Convert an eigenvalue; fails when the representation does not fit the mode.
    fn from_value(v: &ComplexValue) -> Result<Self>;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_value(v: &ComplexValue) -> Result<Self> {
        Ok(v.to_c64())
    }
}

impl Scalar for Cyclotomic {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        Cyclotomic::inv(self)
    }
    fn to_c64(&self) -> Complex64 {
        Cyclotomic::to_c64(self)
    }
    fn from_f64(x: f64) -> Self {
        Cyclotomic::from_f64(x).expect("finite double")
    }
    fn from_value(v: &ComplexValue) -> Result<Self> {
        match v {
            ComplexValue::Polar(p) => Cyclotomic::from_polar(p.modulus(), p.angle()),
            ComplexValue::Float(_) => Err(Error::ModeMismatch {
                germ: "exact",
                spectrum: "float",
            }),
        }
    }
}
