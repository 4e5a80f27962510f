//! Eigenvalue representations and the log-scale distance `ln|a − b|`.

use std::f64::consts::{LN_2, PI, TAU};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `modulus · e^{2πi·angle}` with rational modulus and rational angle in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolar {
    modulus: BigRational,
    angle: BigRational,
}

impl ExactPolar {
    pub fn new(modulus: BigRational, angle: BigRational) -> Result<Self> {
        if !modulus.is_positive() {
            return Err(Error::Invalid(format!("modulus must be positive, got {modulus}")));
        }
        Ok(ExactPolar {
            modulus,
            angle: wrap_turn(angle),
        })
    }

    pub fn from_ratios(mn: i64, md: i64, an: i64, ad: i64) -> Result<Self> {
        if md == 0 || ad == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Self::new(
            BigRational::new(mn.into(), md.into()),
            BigRational::new(an.into(), ad.into()),
        )
    }

    pub fn one() -> Self {
        ExactPolar {
            modulus: BigRational::one(),
            angle: BigRational::zero(),
        }
    }

    pub fn modulus(&self) -> &BigRational {
        &self.modulus
    }

    pub fn angle(&self) -> &BigRational {
        &self.angle
    }

    pub fn mul(&self, other: &ExactPolar) -> ExactPolar {
        ExactPolar {
            modulus: &self.modulus * &other.modulus,
            angle: wrap_turn(&self.angle + &other.angle),
        }
    }

    pub fn pow(&self, e: u32) -> ExactPolar {
        ExactPolar {
            modulus: num_traits::pow(self.modulus.clone(), e as usize),
            angle: wrap_turn(&self.angle * BigRational::from_integer(BigInt::from(e))),
        }
    }

    pub fn ln_modulus(&self) -> f64 {
        ln_rational(&self.modulus)
    }

    pub fn to_c64(&self) -> Complex64 {
        let ln_r = self.ln_modulus();
        let turns = self.angle.to_f64().unwrap_or(0.0);
        Complex64::from_polar(ln_r.exp(), TAU * turns)
    }
}

/// Reduce a rational turn count into `[0, 1)`.
pub fn wrap_turn(a: BigRational) -> BigRational {
    let fl = a.numer().div_floor(a.denom());
    a - BigRational::from_integer(fl)
}

/// Natural log of `|x|` for arbitrarily large or small integers.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * LN_2
}

pub fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// An eigenvalue, either floating point or exact polar.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexValue {
    Float(Complex64),
    Polar(ExactPolar),
}

impl ComplexValue {
    pub fn to_c64(&self) -> Complex64 {
        match self {
            ComplexValue::Float(z) => *z,
            ComplexValue::Polar(p) => p.to_c64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ComplexValue::Float(z) => z.re == 0.0 && z.im == 0.0,
            ComplexValue::Polar(_) => false,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexValue::Polar(_))
    }
}

/// A nonzero complex number in log-polar form, as used for eigenvalue powers.
#[derive(Clone, Debug, PartialEq)]
pub enum LogPolar {
    Exact(ExactPolar),
    /// `ln|z|` and `arg z / 2π` reduced to `[0, 1)`.
    Float { ln_modulus: f64, turns: f64 },
}

impl LogPolar {
    pub fn from_value(v: &ComplexValue) -> LogPolar {
        match v {
            ComplexValue::Polar(p) => LogPolar::Exact(p.clone()),
            ComplexValue::Float(z) => LogPolar::Float {
                ln_modulus: z.norm().ln(),
                turns: (z.arg() / TAU).rem_euclid(1.0),
            },
        }
    }

    pub fn one_like(exact: bool) -> LogPolar {
        if exact {
            LogPolar::Exact(ExactPolar::one())
        } else {
            LogPolar::Float {
                ln_modulus: 0.0,
                turns: 0.0,
            }
        }
    }

    pub fn mul(&self, other: &LogPolar) -> LogPolar {
        match (self, other) {
            (LogPolar::Exact(a), LogPolar::Exact(b)) => LogPolar::Exact(a.mul(b)),
            _ => {
                let (la, ta) = self.float_parts();
                let (lb, tb) = other.float_parts();
                LogPolar::Float {
                    ln_modulus: la + lb,
                    turns: (ta + tb).rem_euclid(1.0),
                }
            }
        }
    }

    pub fn pow(&self, e: u32) -> LogPolar {
        match self {
            LogPolar::Exact(a) => LogPolar::Exact(a.pow(e)),
            LogPolar::Float { ln_modulus, turns } => LogPolar::Float {
                ln_modulus: ln_modulus * e as f64,
                turns: (turns * e as f64).rem_euclid(1.0),
            },
        }
    }

    pub fn ln_modulus(&self) -> f64 {
        self.float_parts().0
    }

    fn float_parts(&self) -> (f64, f64) {
        match self {
            LogPolar::Exact(p) => (p.ln_modulus(), p.angle().to_f64().unwrap_or(0.0)),
            LogPolar::Float { ln_modulus, turns } => (*ln_modulus, *turns),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let (l, t) = self.float_parts();
        Complex64::from_polar(l.exp(), TAU * t)
    }

    pub fn to_value(&self) -> ComplexValue {
        match self {
            LogPolar::Exact(p) => ComplexValue::Polar(p.clone()),
            other => ComplexValue::Float(other.to_c64()),
        }
    }

    /// Exact equality for exact operands; `None` when either side is a float.
    pub fn exact_eq(&self, other: &LogPolar) -> Option<bool> {
        match (self, other) {
            (LogPolar::Exact(a), LogPolar::Exact(b)) => Some(a == b),
            _ => None,
        }
    }

    /// `ln|self − other|`, `−∞` for exactly equal exact operands.
    ///
    /// Uses `|a − b|² = |b|²((ρ−1)² + 4ρ sin²(πΔ))` with `ρ = |a|/|b|` and `Δ`
    /// the angular distance in turns, so there is no cancellation and no
    /// overflow for very large or very small moduli.
    pub fn ln_abs_diff(&self, other: &LogPolar) -> f64 {
        match (self, other) {
            (LogPolar::Exact(a), LogPolar::Exact(b)) => {
                let rho = a.modulus() / b.modulus();
                let ln_rho = ln_rational(&rho);
                let ln_rho_m1 = ln_rational(&(&rho - BigRational::one()));
                let delta = turn_distance(a.angle(), b.angle());
                let ln_sin = ln_sin_pi_exact(&delta);
                combine(b.ln_modulus(), ln_rho, ln_rho_m1, ln_sin)
            }
            _ => {
                let (la, ta) = self.float_parts();
                let (lb, tb) = other.float_parts();
                if la - lb.max(0.0) > 40.0 {
                    return la;
                }
                let ln_rho = la - lb;
                let ln_rho_m1 = ln_rho.exp_m1().abs().ln();
                let d = (ta - tb).rem_euclid(1.0);
                let d = d.min(1.0 - d);
                let ln_sin = if d == 0.0 { f64::NEG_INFINITY } else { (PI * d).sin().ln() };
                combine(lb, ln_rho, ln_rho_m1, ln_sin)
            }
        }
    }
}

fn combine(ln_rb: f64, ln_rho: f64, ln_rho_m1: f64, ln_sin: f64) -> f64 {
    let a = 2.0 * ln_rho_m1;
    let b = 2.0 * (LN_2 + 0.5 * ln_rho + ln_sin);
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let lo = a.min(b);
    ln_rb + 0.5 * (hi + (lo - hi).exp().ln_1p())
}

/// Distance to the nearest integer of `a − b`, in `[0, 1/2]`.
fn turn_distance(a: &BigRational, b: &BigRational) -> BigRational {
    let d = wrap_turn(a - b);
    let other = BigRational::one() - &d;
    if other < d {
        other
    } else {
        d
    }
}

fn ln_sin_pi_exact(delta: &BigRational) -> f64 {
    if delta.is_zero() {
        return f64::NEG_INFINITY;
    }
    let ln_d = ln_rational(delta);
    if ln_d > -13.8 {
        (PI * delta.to_f64().unwrap()).sin().ln()
    } else {
        // sin x = x(1 − x²/6 + …) and x < 1e-5 here.
        let x = PI * ln_d.exp();
        PI.ln() + ln_d + (-x * x / 6.0).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_product_adds_angles() {
        let a = ExactPolar::from_ratios(1, 2, 3, 4).unwrap();
        let b = ExactPolar::from_ratios(4, 1, 1, 2).unwrap();
        let c = a.mul(&b);
        assert_eq!(c.modulus(), &q(2, 1));
        assert_eq!(c.angle(), &q(1, 4));
        assert_eq!(a.pow(4).angle(), &q(0, 1));
    }

    #[test]
    fn ln_abs_diff_matches_direct() {
        let a = LogPolar::Exact(ExactPolar::from_ratios(1, 4, 0, 1).unwrap());
        let b = LogPolar::Exact(ExactPolar::from_ratios(1, 2, 0, 1).unwrap());
        assert!((a.ln_abs_diff(&b) - 0.25f64.ln()).abs() < 1e-15);
        let z = LogPolar::from_value(&ComplexValue::Float(Complex64::new(3.0, 4.0)));
        let w = LogPolar::from_value(&ComplexValue::Float(Complex64::new(1.0, 0.0)));
        let direct = (Complex64::new(3.0, 4.0) - 1.0).norm().ln();
        assert!((z.ln_abs_diff(&w) - direct).abs() < 1e-14);
        assert_eq!(b.ln_abs_diff(&b), f64::NEG_INFINITY);
    }

    #[test]
    fn tiny_exact_angles_stay_finite() {
        let angle = BigRational::new(BigInt::one(), BigInt::one() << 4096u32);
        let a = LogPolar::Exact(ExactPolar::new(q(1, 1), angle).unwrap());
        let one = LogPolar::Exact(ExactPolar::one());
        let l = a.ln_abs_diff(&one);
        let expected = (2.0 * PI).ln() - 4096.0 * LN_2;
        assert!((l - expected).abs() < 1e-9, "{l} vs {expected}");
    }

    #[test]
    fn huge_integers_have_logs() {
        let x = BigInt::one() << 5000u32;
        assert!((ln_bigint(&x) - 5000.0 * LN_2).abs() < 1e-9);
    }
}
