//! Truncated multivariate formal power series over a [`Scalar`] field.
//!
//! Coefficients are kept in a `BTreeMap` keyed by [`MultiIndex`], whose
//! ordering is graded-lex, so iteration walks degree slices in order and
//! every float accumulation happens in the same sequence on every run.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Bound;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;

/// `ord_x` of a series: the largest `m` with `g ∈ (x₁,…,x_s)^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdX {
    Finite(u32),
    /// The truncated series is zero, so every `m` works up to the cutoff.
    InfiniteAtTruncation,
}

impl OrdX {
    pub fn at_least(self, m: u32) -> bool {
        match self {
            OrdX::Finite(v) => v >= m,
            OrdX::InfiniteAtTruncation => true,
        }
    }
}

impl serde::Serialize for OrdX {
    fn serialize<Z: serde::Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            OrdX::Finite(v) => serializer.serialize_u32(*v),
            OrdX::InfiniteAtTruncation => serializer.serialize_str("infinite-at-truncation"),
        }
    }
}

impl fmt::Display for OrdX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdX::Finite(v) => write!(f, "{v}"),
            OrdX::InfiniteAtTruncation => write!(f, "inf"),
        }
    }
}

/// One scalar power series in `n` variables, truncated at degree `N`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    n: usize,
    max_degree: u32,
    allow_constant: bool,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// The zero series without constant term.
    pub fn zero(n: usize, max_degree: u32) -> Self {
        TruncatedSeries {
            n,
            max_degree,
            allow_constant: false,
            coeffs: BTreeMap::new(),
        }
    }

    /// The zero series of the general kind, which may carry a constant term.
    pub fn zero_general(n: usize, max_degree: u32) -> Self {
        TruncatedSeries {
            allow_constant: true,
            ..Self::zero(n, max_degree)
        }
    }

    pub fn constant(n: usize, max_degree: u32, c: S) -> Self {
        let mut s = Self::zero_general(n, max_degree);
        s.set(MultiIndex::zero(n), c);
        s
    }

    /// The coordinate function `z_i` (0-based).
    pub fn variable(n: usize, max_degree: u32, i: usize) -> Self {
        let mut s = Self::zero(n, max_degree);
        s.set(MultiIndex::unit(n, i), S::one());
        s
    }

    pub fn from_terms(
        n: usize,
        max_degree: u32,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self> {
        let mut s = Self::zero(n, max_degree);
        for (k, c) in terms {
            if k.dim() != n {
                return Err(Error::Shape(format!("index {k} has dimension {} not {n}", k.dim())));
            }
            if k.is_zero() {
                return Err(Error::ConstantTerm);
            }
            s.add_term(k, c);
        }
        Ok(s)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn allows_constant(&self) -> bool {
        self.allow_constant
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: &MultiIndex) -> Option<&S> {
        self.coeffs.get(k)
    }

    pub fn get(&self, k: &MultiIndex) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn constant_term(&self) -> S {
        self.get(&MultiIndex::zero(self.n))
    }

    /// Terms of total degree exactly `d`.
    pub fn degree_slice(&self, d: u32) -> impl Iterator<Item = (&MultiIndex, &S)> {
        let lo = first_of_degree(self.n, d);
        let hi = first_of_degree(self.n, d + 1);
        self.coeffs.range((Bound::Included(lo), Bound::Excluded(hi)))
    }

    /// Terms of total degree at most `d`.
    pub fn up_to_degree(&self, d: u32) -> impl Iterator<Item = (&MultiIndex, &S)> {
        let hi = first_of_degree(self.n, d + 1);
        self.coeffs.range((Bound::Unbounded, Bound::Excluded(hi)))
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().map(MultiIndex::degree)
    }

    /// Overwrite a coefficient, dropping it when zero or above the cutoff.
    pub fn set(&mut self, k: MultiIndex, c: S) {
        if k.degree() > self.max_degree {
            return;
        }
        debug_assert!(self.allow_constant || !k.is_zero());
        if c.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn add_term(&mut self, k: MultiIndex, c: S) {
        if k.degree() > self.max_degree || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.coeffs.remove(&k);
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.max_degree != other.max_degree {
            return Err(Error::Shape(format!(
                "(n={}, N={}) vs (n={}, N={})",
                self.n, self.max_degree, other.n, other.max_degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.allow_constant |= other.allow_constant;
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c.clone())
    }

    pub fn scale(&self, factor: &S) -> Self {
        self.map_coeffs(|_, c| c.clone() * factor)
    }

    /// Apply `f(k, c)` to every stored coefficient, restoring canonical form.
    pub fn map_coeffs(&self, mut f: impl FnMut(&MultiIndex, &S) -> S) -> Self {
        let mut out = TruncatedSeries {
            coeffs: BTreeMap::new(),
            ..*self
        };
        for (k, c) in &self.coeffs {
            let v = f(k, c);
            if !v.is_zero() {
                out.coeffs.insert(k.clone(), v);
            }
        }
        out
    }

    /// Cauchy product, discarding everything above the truncation degree.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(self.mul_upto(other, self.max_degree))
    }

    /// Cauchy product keeping only degrees `≤ cap` (`cap ≤ N`).
    pub(crate) fn mul_upto(&self, other: &Self, cap: u32) -> Self {
        let mut out = TruncatedSeries {
            coeffs: BTreeMap::new(),
            allow_constant: self.allow_constant && other.allow_constant,
            ..*self
        };
        let Some(lo_b) = other.lowest_degree() else {
            return out;
        };
        let mut acc: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (ka, ca) in &self.coeffs {
            if ka.degree() + lo_b > cap {
                break;
            }
            for (kb, cb) in other.up_to_degree(cap - ka.degree()) {
                let k = ka.add(kb);
                let p = ca.clone() * cb;
                match acc.get_mut(&k) {
                    Some(v) => *v += &p,
                    None => {
                        acc.insert(k, p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.coeffs = acc;
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncatedSeries::constant(self.n, self.max_degree, S::one());
        for _ in 0..e {
            acc = acc.mul_upto(self, self.max_degree);
        }
        acc
    }

    /// `ord_x` with respect to the first `s` variables.
    pub fn ord_x(&self, s: usize) -> OrdX {
        self.coeffs
            .keys()
            .map(|k| k.head_weight(s))
            .min()
            .map_or(OrdX::InfiniteAtTruncation, OrdX::Finite)
    }

    /// Substitute `inner` into this series: `self(inner₁, …, inner_n)`.
    pub fn compose(&self, inner: &SeriesVector<S>) -> Result<Self> {
        let mut cache = MonomialCache::new(inner)?;
        Ok(cache.substitute(self, self.max_degree))
    }

    /// Same data with a different truncation degree.
    pub fn truncated(&self, max_degree: u32) -> Self {
        let mut out = TruncatedSeries {
            max_degree,
            coeffs: BTreeMap::new(),
            ..*self
        };
        for (k, c) in self.up_to_degree(max_degree) {
            out.coeffs.insert(k.clone(), c.clone());
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.values().map(Scalar::modulus).fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·z^{k}")?;
        }
        Ok(())
    }
}

fn first_of_degree(n: usize, d: u32) -> MultiIndex {
    let mut v = vec![0; n];
    if let Some(last) = v.last_mut() {
        *last = d;
    }
    MultiIndex::new(v)
}

/// `n` series sharing dimension and truncation degree: a formal map `ℂⁿ → ℂⁿ`.
#[derive(Clone, PartialEq)]
pub struct SeriesVector<S: Scalar> {
    components: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> SeriesVector<S> {
    pub fn new(components: Vec<TruncatedSeries<S>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Shape("empty series vector".into()));
        };
        let (n, big_n) = (first.dim(), first.max_degree());
        if components.len() != n {
            return Err(Error::Shape(format!("{} components for dimension {n}", components.len())));
        }
        if components.iter().any(|c| c.dim() != n || c.max_degree() != big_n) {
            return Err(Error::Shape("components disagree on n or N".into()));
        }
        Ok(SeriesVector { components })
    }

    pub fn zero(n: usize, max_degree: u32) -> Self {
        SeriesVector {
            components: (0..n).map(|_| TruncatedSeries::zero(n, max_degree)).collect(),
        }
    }

    pub fn identity(n: usize, max_degree: u32) -> Self {
        SeriesVector {
            components: (0..n)
                .map(|i| TruncatedSeries::variable(n, max_degree, i))
                .collect(),
        }
    }

    /// The diagonal linear map `z ↦ Diag(values)·z`.
    pub fn diagonal(values: &[S], max_degree: u32) -> Self {
        let n = values.len();
        SeriesVector {
            components: values
                .iter()
                .enumerate()
                .map(|(i, v)| TruncatedSeries::variable(n, max_degree, i).scale(v))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.components[0].max_degree()
    }

    pub fn components(&self) -> &[TruncatedSeries<S>] {
        &self.components
    }

    pub fn component(&self, j: usize) -> &TruncatedSeries<S> {
        &self.components[j]
    }

    pub fn component_mut(&mut self, j: usize) -> &mut TruncatedSeries<S> {
        &mut self.components[j]
    }

    /// The vector coefficient of `w^k`.
    pub fn coefficient(&self, k: &MultiIndex) -> Vec<S> {
        self.components.iter().map(|c| c.get(k)).collect()
    }

    /// Every index carrying a nonzero coefficient in some component, ascending.
    pub fn support(&self) -> Vec<MultiIndex> {
        let mut all: Vec<MultiIndex> = self
            .components
            .iter()
            .flat_map(|c| c.coeffs.keys().cloned())
            .collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, TruncatedSeries::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, TruncatedSeries::sub)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&TruncatedSeries<S>, &TruncatedSeries<S>) -> Result<TruncatedSeries<S>>,
    ) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape("vector dimensions differ".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesVector { components })
    }

    /// `self ∘ inner`, truncated at `N`.
    pub fn compose(&self, inner: &SeriesVector<S>) -> Result<Self> {
        if self.dim() != inner.dim() || self.max_degree() != inner.max_degree() {
            return Err(Error::Shape("compose operands differ in n or N".into()));
        }
        let mut cache = MonomialCache::new(inner)?;
        let big_n = self.max_degree();
        Ok(SeriesVector {
            components: self
                .components
                .iter()
                .map(|c| cache.substitute(c, big_n))
                .collect(),
        })
    }

    /// `self ∘ Diag(values)`: coefficient of `w^k` in component `j` times `values^k`.
    pub fn precompose_diagonal(&self, mut powers: impl FnMut(&MultiIndex) -> S) -> Self {
        let mut memo: HashMap<MultiIndex, S> = HashMap::new();
        SeriesVector {
            components: self
                .components
                .iter()
                .map(|c| {
                    c.map_coeffs(|k, v| {
                        let p = memo.entry(k.clone()).or_insert_with(|| powers(k));
                        v.clone() * &*p
                    })
                })
                .collect(),
        }
    }

    /// `Diag(values) ∘ self`: component `j` scaled by `values[j]`.
    pub fn postcompose_diagonal(&self, values: &[S]) -> Self {
        SeriesVector {
            components: self
                .components
                .iter()
                .zip(values)
                .map(|(c, v)| c.scale(v))
                .collect(),
        }
    }

    pub fn truncated(&self, max_degree: u32) -> Self {
        SeriesVector {
            components: self.components.iter().map(|c| c.truncated(max_degree)).collect(),
        }
    }

    /// Largest coefficient norm over all indices (the `‖·‖_∞` of each `ψ_k`).
    pub fn sup_norm(&self) -> f64 {
        self.components.iter().map(TruncatedSeries::sup_norm).fold(0.0, f64::max)
    }
}

impl<S: Scalar> fmt::Debug for SeriesVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

/// `‖v‖_∞` of a vector coefficient.
pub fn coeff_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(Scalar::modulus).fold(0.0, f64::max)
}

/// Degree-by-degree composition for sweeps where `inner` grows one slice at a
/// time. `[inner^l]_d` for `|l| ≥ 2` only reads `inner` below degree `d`, so
/// every memoized slice stays valid as long as callers ask for degree `d`
/// only once the slices of `inner` below `d` are final.
pub(crate) struct SliceComposer<S: Scalar> {
    slices: HashMap<(MultiIndex, u32), Vec<(MultiIndex, S)>>,
}

impl<S: Scalar> SliceComposer<S> {
    pub(crate) fn new() -> Self {
        SliceComposer { slices: HashMap::new() }
    }

    /// `[outer ∘ inner]_d`. Linear terms of `outer` read `inner` at degree `d`.
    pub(crate) fn slice(&mut self, outer: &TruncatedSeries<S>, inner: &SeriesVector<S>, d: u32) -> BTreeMap<MultiIndex, S> {
        let mut acc: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (l, c) in outer.up_to_degree(d) {
            if l.degree() == 0 {
                continue;
            }
            self.fill(l, d, inner);
            for (k, v) in &self.slices[&(l.clone(), d)] {
                let p = c.clone() * v;
                match acc.get_mut(k) {
                    Some(a) => *a += &p,
                    None => {
                        acc.insert(k.clone(), p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    fn fill(&mut self, l: &MultiIndex, d: u32, inner: &SeriesVector<S>) {
        if self.slices.contains_key(&(l.clone(), d)) {
            return;
        }
        let i = l.last_nonzero().expect("nonzero index");
        let out: Vec<(MultiIndex, S)> = if l.degree() == 1 {
            inner.components[i].degree_slice(d).map(|(k, v)| (k.clone(), v.clone())).collect()
        } else {
            let prev = l.with_component(i, l.get(i) - 1);
            let mut acc: BTreeMap<MultiIndex, S> = BTreeMap::new();
            for a in prev.degree()..d {
                self.fill(&prev, a, inner);
                let lhs = &self.slices[&(prev.clone(), a)];
                for (kb, cb) in inner.components[i].degree_slice(d - a) {
                    for (ka, ca) in lhs {
                        let p = ca.clone() * cb;
                        let k = ka.add(kb);
                        match acc.get_mut(&k) {
                            Some(v) => *v += &p,
                            None => {
                                acc.insert(k, p);
                            }
                        }
                    }
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        };
        self.slices.insert((l.clone(), d), out);
    }
}

/// Memoized monomials `inner^l`, each built from `inner^{l − e_i} · inner_i`.
struct MonomialCache<'a, S: Scalar> {
    inner: &'a SeriesVector<S>,
    monomials: HashMap<(MultiIndex, u32), TruncatedSeries<S>>,
}

impl<'a, S: Scalar> MonomialCache<'a, S> {
    fn new(inner: &'a SeriesVector<S>) -> Result<Self> {
        if inner
            .components
            .iter()
            .any(|c| !c.constant_term().is_zero())
        {
            return Err(Error::ConstantTerm);
        }
        Ok(MonomialCache {
            inner,
            monomials: HashMap::new(),
        })
    }

    fn monomial(&mut self, l: &MultiIndex, cap: u32) -> TruncatedSeries<S> {
        if let Some(m) = self.monomials.get(&(l.clone(), cap)) {
            return m.clone();
        }
        let n = self.inner.dim();
        let big_n = self.inner.max_degree();
        let result = match l.last_nonzero() {
            None => TruncatedSeries::constant(n, big_n, S::one()),
            Some(i) => {
                let prev = l.with_component(i, l.get(i) - 1);
                let base = self.monomial(&prev, cap);
                base.mul_upto(&self.inner.components[i], cap)
            }
        };
        self.monomials.insert((l.clone(), cap), result.clone());
        result
    }

    fn substitute(&mut self, outer: &TruncatedSeries<S>, cap: u32) -> TruncatedSeries<S> {
        let n = self.inner.dim();
        let big_n = self.inner.max_degree();
        let mut acc: BTreeMap<MultiIndex, S> = BTreeMap::new();
        for (l, c) in outer.terms() {
            // inner has no constant term, so inner^l starts at degree |l|.
            if l.degree() > cap {
                break;
            }
            let m = self.monomial(l, cap);
            for (k, v) in m.terms() {
                let p = c.clone() * v;
                match acc.get_mut(k) {
                    Some(a) => *a += &p,
                    None => {
                        acc.insert(k.clone(), p);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        let mut out = if outer.allows_constant() {
            TruncatedSeries::zero_general(n, big_n)
        } else {
            TruncatedSeries::zero(n, big_n)
        };
        out.coeffs = acc;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use num_complex::Complex64;

    type C = Cyclotomic;

    fn int(i: i64) -> C {
        C::from_integer(i)
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn series(n: usize, big_n: u32, terms: &[(&[u32], i64)]) -> TruncatedSeries<C> {
        TruncatedSeries::from_terms(n, big_n, terms.iter().map(|(k, c)| (idx(k), int(*c)))).unwrap()
    }

    #[test]
    fn add_cancels_to_canonical_zero() {
        let a = series(2, 4, &[(&[1, 0], 1)]);
        let b = series(2, 4, &[(&[1, 0], -1)]);
        let s = a.add(&b).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
        let c = series(2, 4, &[(&[2, 0], 1)]);
        let d = series(2, 4, &[(&[1, 1], 1)]);
        assert_eq!(c.add(&d).unwrap().len(), 2);
    }

    #[test]
    fn add_cancels_float() {
        let a = TruncatedSeries::from_terms(2, 3, [(idx(&[2, 0]), Complex64::new(1.0, 0.0))]).unwrap();
        let b = TruncatedSeries::from_terms(2, 3, [(idx(&[2, 0]), Complex64::new(-1.0, 0.0))]).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = series(2, 4, &[(&[1, 0], 1)]);
        let b = series(2, 5, &[(&[1, 0], 1)]);
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn mul_truncates() {
        let x = series(1, 3, &[(&[1], 1)]);
        let y = series(2, 3, &[(&[0, 1], 1)]);
        let x2 = series(2, 3, &[(&[1, 0], 1)]);
        assert_eq!(x2.mul(&y).unwrap(), series(2, 3, &[(&[1, 1], 1)]));
        let w = series(1, 3, &[(&[1], 1), (&[2], 1)]);
        assert_eq!(w.mul(&w).unwrap(), series(1, 3, &[(&[2], 1), (&[3], 2)]));
        assert!(x.mul(&TruncatedSeries::zero(1, 3)).unwrap().is_zero());
    }

    #[test]
    fn compose_examples() {
        let inner = SeriesVector::new(vec![series(1, 3, &[(&[1], 1), (&[2], 1)])]).unwrap();
        let lin = SeriesVector::new(vec![series(1, 3, &[(&[1], 2)])]).unwrap();
        assert_eq!(
            lin.compose(&inner).unwrap(),
            SeriesVector::new(vec![series(1, 3, &[(&[1], 2), (&[2], 2)])]).unwrap()
        );
        let sq = SeriesVector::new(vec![series(1, 3, &[(&[2], 1)])]).unwrap();
        assert_eq!(
            sq.compose(&inner).unwrap(),
            SeriesVector::new(vec![series(1, 3, &[(&[2], 1), (&[3], 2)])]).unwrap()
        );
        let f = SeriesVector::new(vec![
            series(2, 4, &[(&[1, 0], 3), (&[1, 1], 2), (&[0, 3], -1)]),
            series(2, 4, &[(&[0, 1], 1), (&[2, 0], 5)]),
        ])
        .unwrap();
        assert_eq!(f.compose(&SeriesVector::identity(2, 4)).unwrap(), f);
    }

    #[test]
    fn compose_rejects_constant_inner() {
        let mut c = TruncatedSeries::constant(1, 3, int(1));
        c.set(idx(&[1]), int(1));
        let inner = SeriesVector::new(vec![c]).unwrap();
        let outer = SeriesVector::identity(1, 3);
        assert!(matches!(outer.compose(&inner), Err(Error::ConstantTerm)));
    }

    #[test]
    fn ord_x_examples() {
        let g = series(2, 5, &[(&[2, 1], 1), (&[3, 0], 1)]);
        assert_eq!(g.ord_x(1), OrdX::Finite(2));
        let h = series(2, 5, &[(&[0, 3], 1)]);
        assert_eq!(h.ord_x(1), OrdX::Finite(0));
        assert_eq!(TruncatedSeries::<C>::zero(2, 5).ord_x(1), OrdX::InfiniteAtTruncation);
    }

    #[test]
    fn coeff_norm_examples() {
        assert_eq!(coeff_norm::<Complex64>(&[Complex64::new(0.0, 0.0); 3]), 0.0);
        let v = [Complex64::new(3.0, 4.0), Complex64::new(1.0, 0.0)];
        assert_eq!(coeff_norm(&v), 5.0);
        assert_eq!(coeff_norm(&[int(-4), int(0)]), 4.0);
    }

    #[test]
    fn linear_outer_scales_coefficients() {
        let psi = SeriesVector::new(vec![
            series(2, 3, &[(&[1, 0], 1), (&[1, 1], 7)]),
            series(2, 3, &[(&[0, 1], 1), (&[2, 0], -2)]),
        ])
        .unwrap();
        let lam = [int(2), int(3)];
        let lhs = SeriesVector::diagonal(&lam, 3).compose(&psi).unwrap();
        assert_eq!(lhs, psi.postcompose_diagonal(&lam));
    }
}
