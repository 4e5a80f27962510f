//! Oracles and generators shared by the integration tests. Nothing here calls
//! the recursive solver or the resonance classifier.
#![allow(dead_code)]

use std::collections::HashMap;

use germ_core::{Cyclotomic, ExactPolar, Germ, MultiIndex, Scalar, SeriesVector, Spectrum, TruncatedSeries};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn cq(n: i64, d: i64) -> Cyclotomic {
    Cyclotomic::from_rational(q(n, d))
}

pub fn idx(e: &[u32]) -> MultiIndex {
    MultiIndex::new(e.to_vec())
}

pub fn polar(mn: i64, md: i64, an: i64, ad: i64) -> ExactPolar {
    ExactPolar::from_ratios(mn, md, an, ad).unwrap()
}

/// `f(z) = z/2 + z²`.
pub fn koenigs_exact(big_n: u32) -> Germ<Cyclotomic> {
    let spec = Spectrum::exact(vec![polar(1, 2, 0, 1)], 1).unwrap();
    let tail = TruncatedSeries::from_terms(1, big_n, vec![(idx(&[2]), cq(1, 1))]).unwrap();
    Germ::new(spec, SeriesVector::new(vec![tail]).unwrap(), vec![]).unwrap()
}

pub fn koenigs_float(big_n: u32) -> Germ<Complex64> {
    let spec = Spectrum::float(vec![Complex64::new(0.5, 0.0)], 1).unwrap();
    let tail = TruncatedSeries::from_terms(1, big_n, vec![(idx(&[2]), Complex64::new(1.0, 0.0))]).unwrap();
    Germ::new(spec, SeriesVector::new(vec![tail]).unwrap(), vec![]).unwrap()
}

/// `(λ(1+y)x + x², y)` with split 1.
pub fn remark_germ<S: Scalar>(spec: Spectrum, big_n: u32) -> Germ<S> {
    let lambda = S::from_value(&spec.values()[0]).unwrap();
    let x = TruncatedSeries::from_terms(2, big_n, vec![(idx(&[1, 1]), lambda), (idx(&[2, 0]), S::one())]).unwrap();
    let y = TruncatedSeries::zero(2, big_n);
    Germ::new(spec, SeriesVector::new(vec![x, y]).unwrap(), vec![]).unwrap()
}

pub fn remark_exact(big_n: u32) -> Germ<Cyclotomic> {
    remark_germ(Spectrum::exact(vec![polar(1, 2, 1, 5), polar(1, 1, 0, 1)], 1).unwrap(), big_n)
}

pub fn golden_turns() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

pub fn remark_float(big_n: u32) -> Germ<Complex64> {
    let l = Complex64::from_polar(1.0, std::f64::consts::TAU * golden_turns());
    remark_germ(Spectrum::float(vec![l, Complex64::new(1.0, 0.0)], 1).unwrap(), big_n)
}

/// `(λ, μ₁, μ₂, μ₃, μ₄) = (5, 2, 3, 18, 5)`: `μ₁μ₂² = μ₃`, `λ = μ₄`.
pub fn five_tuple() -> Spectrum {
    Spectrum::exact([5, 2, 3, 18, 5].iter().map(|&m| polar(m, 1, 0, 1)).collect(), 1).unwrap()
}

/// Every `(k, j)` with `2 ≤ |k| ≤ m` and `λ̃^k = λ̃_j`, by direct products in
/// the cyclotomic field. `j` is 0-based.
pub fn brute_resonances(values: &[Cyclotomic], m: u32) -> Vec<(MultiIndex, usize)> {
    let n = values.len();
    let mut out = Vec::new();
    for k in MultiIndex::in_degree_range(n, 2, m) {
        let mut p = Cyclotomic::one();
        for (i, &e) in k.exponents().iter().enumerate() {
            for _ in 0..e {
                p = p * &values[i];
            }
        }
        for (j, v) in values.iter().enumerate() {
            if &p == v {
                out.push((k.clone(), j));
            }
        }
    }
    out
}

pub fn exact_values(spec: &Spectrum) -> Vec<Cyclotomic> {
    spec.values().iter().map(|v| <Cyclotomic as Scalar>::from_value(v).unwrap()).collect()
}

/// Solve `h∘F = Λh` for `h = z + ĥ` as one dense linear system per coordinate,
/// then invert `h` by the fixed point `ψ = w − ĥ∘ψ`.
pub fn dense_linearization(f: &Germ<Cyclotomic>) -> Option<SeriesVector<Cyclotomic>> {
    let (n, big_n) = (f.n(), f.max_degree());
    let map = f.map();
    let idxs = MultiIndex::in_degree_range(n, 2, big_n);
    let pos: HashMap<&MultiIndex, usize> = idxs.iter().enumerate().map(|(i, k)| (k, i)).collect();
    // F^m for every m
    let powers: Vec<TruncatedSeries<Cyclotomic>> = idxs
        .iter()
        .map(|m| {
            let mut acc = TruncatedSeries::constant(n, big_n, Cyclotomic::one());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(map.component(i)).unwrap();
                }
            }
            acc
        })
        .collect();
    let mut comps = Vec::with_capacity(n);
    for j in 0..n {
        let size = idxs.len();
        let mut a = vec![vec![Cyclotomic::zero(); size + 1]; size];
        for (col, pm) in powers.iter().enumerate() {
            for (k, c) in pm.terms() {
                if let Some(&row) = pos.get(k) {
                    a[row][col] = a[row][col].clone() + c;
                }
            }
        }
        for (row, k) in idxs.iter().enumerate() {
            a[row][row] = a[row][row].clone() - &f.lambda()[j];
            a[row][size] = -f.tail().component(j).get(k);
        }
        let h = gauss(a)?;
        let mut terms = vec![(MultiIndex::unit(n, j), Cyclotomic::one())];
        for (k, v) in idxs.iter().zip(h) {
            terms.push((k.clone(), v));
        }
        comps.push(
            TruncatedSeries::from_terms(n, big_n, terms.into_iter().filter(|(_, v)| !v.is_zero())).unwrap(),
        );
    }
    let h = SeriesVector::new(comps).unwrap();
    let id = SeriesVector::identity(n, big_n);
    let h_hat = h.sub(&id).unwrap();
    let mut psi = id.clone();
    for _ in 0..big_n {
        psi = id.sub(&h_hat.compose(&psi).unwrap()).unwrap();
    }
    Some(psi)
}

/// Gauss–Jordan on an augmented matrix; `None` if singular.
fn gauss(mut a: Vec<Vec<Cyclotomic>>) -> Option<Vec<Cyclotomic>> {
    let size = a.len();
    for col in 0..size {
        let piv = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv()?;
        for c in col..=size {
            a[col][c] = a[col][c].clone() * &inv;
        }
        for r in 0..size {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..=size {
                    let t = factor.clone() * &a[col][c];
                    a[r][c] = a[r][c].clone() - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[size].clone()).collect())
}

/// An exact eigenvalue `p/q · e^{2πi a/d}` with small `p, q` and `d ≤ 6`.
pub fn random_exact_value(rng: &mut ChaCha8Rng) -> ExactPolar {
    let num = rng.gen_range(1..=9);
    let den = rng.gen_range(1..=9);
    let d = rng.gen_range(1..=6);
    let a = rng.gen_range(0..d);
    polar(num, den, a, d)
}

pub fn random_gaussian(rng: &mut ChaCha8Rng) -> Cyclotomic {
    let re = q(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    let im = if rng.gen_bool(0.5) { q(rng.gen_range(-5..=5), rng.gen_range(1..=4)) } else { q(0, 1) };
    Cyclotomic::from_gaussian(re, im)
}

pub fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z;
        }
    }
}

/// A tail with each admissible monomial of degree `2..=top` present with
/// probability `p`. `admit(k, j)` filters monomials (0-based `j`).
pub fn random_tail<S: Scalar>(
    rng: &mut ChaCha8Rng,
    n: usize,
    big_n: u32,
    top: u32,
    p: f64,
    admit: impl Fn(&MultiIndex, usize) -> bool,
    mut coeff: impl FnMut(&mut ChaCha8Rng) -> S,
) -> SeriesVector<S> {
    let comps = (0..n)
        .map(|j| {
            let mut terms = Vec::new();
            for k in MultiIndex::in_degree_range(n, 2, top.min(big_n)) {
                if admit(&k, j) && rng.gen_bool(p) {
                    let c = coeff(rng);
                    if !c.is_zero() {
                        terms.push((k, c));
                    }
                }
            }
            TruncatedSeries::from_terms(n, big_n, terms).unwrap()
        })
        .collect();
    SeriesVector::new(comps).unwrap()
}

/// Osculating coordinates with a linear restriction: `ord_x(f_i¹) ≥ 2` and
/// `ord_x(f_j²) ≥ 1`.
pub fn osculating_admits(s: usize) -> impl Fn(&MultiIndex, usize) -> bool {
    move |k, j| if j < s { k.head_weight(s) >= 2 } else { k.head_weight(s) >= 1 }
}
