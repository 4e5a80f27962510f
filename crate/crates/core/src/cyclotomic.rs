//! Exact arithmetic in cyclotomic fields `ℚ(ζ_M)`.
//!
//! An element is stored as a rational coefficient vector over the power
//! basis `1, ζ_M, …, ζ_M^{φ(M)−1}`. Elements of different orders are
//! combined in `ℚ(ζ_L)` with `L = lcm(M₁, M₂)`, so no shared field
//! context is needed and zero/one live in `ℚ = ℚ(ζ_1)`.
//!
//! This is the coefficient ring for exact mode: eigenvalues of the form
//! `r·e^{2πi a/b}` with rational `r`, `a/b` and Gaussian-rational
//! coefficients `p + iq` all live in some `ℚ(ζ_M)`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest field order accepted; `φ(M)`-sized products get slow beyond this.
pub const MAX_ORDER: u64 = 2048;

type Poly = Vec<BigRational>;

fn cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `n`-th cyclotomic polynomial, low-to-high coefficients, monic.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cache().lock().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (t, dc) in den.iter().enumerate() {
            rem[i + t] -= &c * dc;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// An element of `ℚ(ζ_order)`.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Poly,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(i: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// Exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::from_rational)
    }

    /// `re + i·im`, living in `ℚ(ζ_4)`.
    pub fn from_gaussian(re: BigRational, im: BigRational) -> Self {
        if im.is_zero() {
            return Self::from_rational(re);
        }
        Cyclotomic {
            order: 4,
            coeffs: vec![re, im],
        }
    }

    /// `modulus · e^{2πi·angle}` for a rational angle.
    pub fn from_polar(modulus: &BigRational, angle: &BigRational) -> Result<Self> {
        let den = angle.denom();
        let order = den
            .to_u64()
            .filter(|&d| d <= MAX_ORDER)
            .ok_or_else(|| Error::Unsupported(format!(
                "exact angle denominator {den} exceeds the supported cyclotomic order {MAX_ORDER}"
            )))? as u32;
        let a = angle.numer().mod_floor(&BigInt::from(order)).to_u32().unwrap();
        let mut p = vec![BigRational::zero(); a as usize + 1];
        p[a as usize] = modulus.clone();
        Ok(Self::reduce(order, p))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients over the power basis of `ℚ(ζ_order)`.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Rebuild from `order` and power-basis coefficients (reduced if longer).
    pub fn from_coefficients(order: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if order == 0 || order as u64 > MAX_ORDER {
            return Err(Error::Unsupported(format!("cyclotomic order {order}")));
        }
        Ok(Self::reduce(order, coeffs))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `(re, im)` when the element is visibly in `ℚ(i)`.
    pub fn as_gaussian(&self) -> Option<(BigRational, BigRational)> {
        match self.order {
            1 | 2 => Some((self.coeffs[0].clone(), BigRational::zero())),
            4 => Some((self.coeffs[0].clone(), self.coeffs[1].clone())),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        let m = self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = c.to_f64().unwrap_or(f64::NAN);
            let ang = TAU * i as f64 / m;
            acc += Complex64::new(w * ang.cos(), w * ang.sin());
        }
        acc
    }

    /// Reduce a polynomial in `ζ_order` to the canonical basis.
    fn reduce(order: u32, mut p: Poly) -> Self {
        let l = order as usize;
        if p.len() > l {
            let mut folded = vec![BigRational::zero(); l];
            for (i, c) in p.into_iter().enumerate() {
                if !c.is_zero() {
                    folded[i % l] += c;
                }
            }
            p = folded;
        }
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        for d in (deg..p.len()).rev() {
            if p[d].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut p[d]);
            for (t, pc) in phi.iter().enumerate().take(deg) {
                if !pc.is_zero() {
                    p[d - deg + t] -= &c * BigRational::from_integer(pc.clone());
                }
            }
        }
        p.resize(deg, BigRational::zero());
        if p.is_empty() {
            p.push(BigRational::zero());
        }
        Cyclotomic { order, coeffs: p }
    }

    fn embed(&self, target: u32) -> Poly {
        if target == self.order {
            return self.coeffs.clone();
        }
        let stride = (target / self.order) as usize;
        let mut p = vec![BigRational::zero(); (self.coeffs.len() - 1) * stride + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * stride] = c.clone();
        }
        Self::reduce(target, p).coeffs
    }

    fn common(&self, other: &Self) -> (u32, Poly, Poly) {
        let l = self.order.lcm(&other.order);
        (l, self.embed(l), other.embed(l))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `ℚ[x]`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order <= 2 {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let phi: Poly = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let a = trim(self.coeffs.clone());
        // Invariant: r_i ≡ s_i · a (mod Φ).
        let (mut r0, mut s0) = (phi, vec![]);
        let (mut r1, mut s1) = (a, vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return None;
            }
        }
        let c = r1[0].recip();
        let s: Poly = s1.into_iter().map(|x| x * &c).collect();
        Some(Self::reduce(self.order, s))
    }
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(out)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut rem = trim(a.clone());
    let b = trim(b.clone());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lead = b[db].recip();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for i in (0..q.len()).rev() {
        let c = &rem[i + db] * &lead;
        if c.is_zero() {
            continue;
        }
        for (t, bc) in b.iter().enumerate() {
            rem[i + t] -= &c * bc;
        }
        q[i] = c;
    }
    (trim(q), trim(rem))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((re, im)) = self.as_gaussian() {
            return if im.is_zero() {
                write!(f, "{re}")
            } else {
                write!(f, "{re}{}{}i", if im.is_negative() { "" } else { "+" }, im)
            };
        }
        write!(f, "Q(ζ{})[", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order == rhs.order {
            let mut c = self.coeffs;
            for (x, y) in c.iter_mut().zip(rhs.coeffs.iter()) {
                *x += y;
            }
            return Cyclotomic { order: rhs.order, coeffs: c };
        }
        let (l, mut a, b) = self.common(rhs);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x += y;
        }
        Cyclotomic { order: l, coeffs: a }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        self + &rhs
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == rhs.order {
            for (x, y) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
                *x += y;
            }
        } else {
            *self = std::mem::replace(self, Cyclotomic::zero()) + rhs;
        }
    }
}

impl Sub<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs.clone())
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<&Cyclotomic> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        if rhs.order == 1 {
            let c = &rhs.coeffs[0];
            return Cyclotomic {
                order: self.order,
                coeffs: self.coeffs.into_iter().map(|x| x * c).collect(),
            };
        }
        if self.order == 1 {
            let c = &self.coeffs[0];
            return Cyclotomic {
                order: rhs.order,
                coeffs: rhs.coeffs.iter().map(|x| x * c).collect(),
            };
        }
        let (l, a, b) = self.common(rhs);
        // integer numerators over one denominator: no gcd per product term
        let (a, da) = integral(&a);
        let (b, db) = integral(&b);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        let coeffs = reduce_integral(l, out);
        let den = da * db;
        Cyclotomic {
            order: l,
            coeffs: coeffs.into_iter().map(|c| BigRational::new(c, den.clone())).collect(),
        }
    }
}

/// `p = num / den` with integer `num`.
fn integral(p: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = p.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (num, den)
}

/// [`Cyclotomic::reduce`] for integer coefficients; `Φ` is monic so no
/// denominators appear.
fn reduce_integral(order: u32, mut p: Vec<BigInt>) -> Vec<BigInt> {
    let l = order as usize;
    if p.len() > l {
        let mut folded = vec![BigInt::zero(); l];
        for (i, c) in p.into_iter().enumerate() {
            if !c.is_zero() {
                folded[i % l] += c;
            }
        }
        p = folded;
    }
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    for d in (deg..p.len()).rev() {
        if p[d].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut p[d]);
        for (t, pc) in phi.iter().enumerate().take(deg) {
            if !pc.is_zero() {
                p[d - deg + t] -= &c * pc;
            }
        }
    }
    p.resize(deg.max(1), BigInt::zero());
    p
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        let as_i64 = |n| -> Vec<i64> {
            cyclotomic_polynomial(n).iter().map(|c| c.to_i64().unwrap()).collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u32 - 1, totient(n));
        }
    }

    #[test]
    fn gaussian_arithmetic() {
        let i = Cyclotomic::from_gaussian(q(0, 1), q(1, 1));
        assert_eq!(i.clone() * &i, Cyclotomic::from_integer(-1));
        let z = Cyclotomic::from_gaussian(q(3, 1), q(4, 1));
        let w = z.inv().unwrap();
        assert_eq!(w.clone() * &z, Cyclotomic::one());
        assert_eq!(w.as_gaussian(), Some((q(3, 25), q(-4, 25))));
    }

    #[test]
    fn mixed_orders_embed() {
        // ζ_3 + ζ_3² = −1 and ζ_6 = −ζ_3².
        let z3 = Cyclotomic::from_polar(&q(1, 1), &q(1, 3)).unwrap();
        let z3sq = z3.clone() * &z3;
        assert_eq!(z3.clone() + &z3sq, Cyclotomic::from_integer(-1));
        let z6 = Cyclotomic::from_polar(&q(1, 1), &q(1, 6)).unwrap();
        assert_eq!(z6, -z3sq);
        let i = Cyclotomic::from_gaussian(q(0, 1), q(1, 1));
        let prod = z3.clone() * &i;
        assert_eq!(prod.order(), 12);
        let c = prod.to_c64();
        let expect = Complex64::from_polar(1.0, TAU / 3.0 + TAU / 4.0);
        assert!((c - expect).norm() < 1e-14);
    }

    #[test]
    fn inverse_in_higher_order() {
        let lam = Cyclotomic::from_polar(&q(2, 3), &q(2, 5)).unwrap();
        let d = lam.clone() * &lam - &lam;
        let inv = d.inv().unwrap();
        assert_eq!(inv * &d, Cyclotomic::one());
        assert!(Cyclotomic::zero().inv().is_none());
    }

    #[test]
    fn rejects_huge_orders() {
        let angle = BigRational::new(BigInt::one(), BigInt::from(1u64 << 40));
        assert!(Cyclotomic::from_polar(&q(1, 1), &angle).is_err());
    }
}
