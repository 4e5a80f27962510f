//! Degree-by-degree solution of `f∘ψ = ψ∘Λ`, Poincaré–Dulac normal forms and
//! the coordinate test for osculating manifolds.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;
use crate::series::{OrdX, SeriesVector, SliceComposer, TruncatedSeries};
use crate::spectrum::{IndexClass, Spectrum};

/// `f(z) = Λz + f̂(z)` with `Λ = Diag(λ̃)`.
#[derive(Clone, Debug)]
pub struct Germ<S: Scalar> {
    spectrum: Spectrum,
    lambda: Vec<S>,
    tail: SeriesVector<S>,
    /// Off-diagonal Jordan flags `ε_1..ε_{n−1}`; empty means all zero.
    epsilon: Vec<u8>,
}

impl<S: Scalar> Germ<S> {
    pub fn new(spectrum: Spectrum, tail: SeriesVector<S>, epsilon: Vec<u8>) -> Result<Self> {
        if S::MODE != spectrum.mode() {
            return Err(Error::ModeMismatch {
                germ: S::MODE.name(),
                spectrum: spectrum.mode().name(),
            });
        }
        let n = spectrum.n();
        if tail.dim() != n {
            return Err(Error::Shape(format!("tail has {} components, spectrum has {n}", tail.dim())));
        }
        for c in tail.components() {
            if let Some(d) = c.lowest_degree() {
                if d < 2 {
                    return Err(Error::Invalid("tail must vanish to first order".into()));
                }
            }
        }
        if !epsilon.is_empty() && epsilon.len() != n - 1 {
            return Err(Error::Invalid(format!("expected {} epsilon entries, got {}", n - 1, epsilon.len())));
        }
        if epsilon.iter().any(|&e| e > 1) {
            return Err(Error::Invalid("epsilon entries must be 0 or 1".into()));
        }
        let lambda = spectrum
            .values()
            .iter()
            .map(S::from_value)
            .collect::<Result<Vec<_>>>()?;
        Ok(Germ {
            spectrum,
            lambda,
            tail,
            epsilon,
        })
    }

    pub fn linear(spectrum: Spectrum, max_degree: u32) -> Result<Self> {
        let n = spectrum.n();
        Self::new(spectrum, SeriesVector::zero(n, max_degree), Vec::new())
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn lambda(&self) -> &[S] {
        &self.lambda
    }

    pub fn tail(&self) -> &SeriesVector<S> {
        &self.tail
    }

    pub fn epsilon(&self) -> &[u8] {
        &self.epsilon
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    pub fn s(&self) -> usize {
        self.spectrum.s()
    }

    pub fn max_degree(&self) -> u32 {
        self.tail.max_degree()
    }

    pub fn is_diagonal(&self) -> bool {
        self.epsilon.iter().all(|&e| e == 0)
    }

    /// Same germ with a different truncation degree.
    pub fn with_max_degree(&self, max_degree: u32) -> Self {
        Germ {
            tail: self.tail.truncated(max_degree),
            ..self.clone()
        }
    }

    /// Same linear part with a new tail.
    pub fn with_tail(&self, tail: SeriesVector<S>) -> Result<Self> {
        Germ::new(self.spectrum.clone(), tail, self.epsilon.clone())
    }

    /// `Λz + f̂(z)` as a series vector (Jordan flags are not included).
    pub fn map(&self) -> SeriesVector<S> {
        SeriesVector::diagonal(&self.lambda, self.max_degree())
            .add(&self.tail)
            .expect("same shape")
    }
}

/// `λ̃^k` in the coefficient field, built from `λ̃^{k−e_i}·λ_i`.
pub(crate) struct Powers<'a, S: Scalar> {
    lambda: &'a [S],
    memo: HashMap<MultiIndex, S>,
}

impl<'a, S: Scalar> Powers<'a, S> {
    pub(crate) fn new(lambda: &'a [S]) -> Self {
        Powers {
            lambda,
            memo: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, k: &MultiIndex) -> S {
        if let Some(v) = self.memo.get(k) {
            return v.clone();
        }
        let v = match k.last_nonzero() {
            None => S::one(),
            Some(i) => self.get(&k.with_component(i, k.get(i) - 1)) * &self.lambda[i],
        };
        self.memo.insert(k.clone(), v.clone());
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Divided by a nonzero small divisor.
    Solved,
    /// Set to zero by the policy for `K₁` in the head block.
    ForcedZeroK1,
    /// Set to zero by the policy for `K₂`.
    ForcedZeroK2,
    /// A resonant index outside `K₁ ∪ K₂`.
    ForcedZeroResonant,
    /// `ψ²_{k,j} = f²_{k,j}(λ̃^k − μ_j)^{-1}` for `k ∈ K₁`.
    ResonantFormula,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Solved => "solved",
            Provenance::ForcedZeroK1 => "forced-zero-k1",
            Provenance::ForcedZeroK2 => "forced-zero-k2",
            Provenance::ForcedZeroResonant => "forced-zero-resonant",
            Provenance::ResonantFormula => "resonant-formula",
        }
    }
}

/// One `(k, j)` cell of the sweep.
#[derive(Clone, Debug)]
pub struct Record<S> {
    pub index: MultiIndex,
    /// 0-based coordinate.
    pub coord: usize,
    pub provenance: Provenance,
    /// The assembled coefficient of `w^k` in `f̂∘ψ`, component `coord`.
    pub rhs: S,
}

#[derive(Clone, Debug)]
pub struct Obstruction<S> {
    pub index: MultiIndex,
    /// 0-based coordinate.
    pub coord: usize,
    pub coefficient: S,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct LinearizationResult<S: Scalar> {
    pub psi: SeriesVector<S>,
    pub records: Vec<Record<S>>,
    pub obstructions: Vec<Obstruction<S>>,
    pub residual: f64,
    pub relative_residual: f64,
    pub warnings: Vec<String>,
}

impl<S: Scalar> LinearizationResult<S> {
    pub fn provenance(&self, k: &MultiIndex, coord: usize) -> Option<Provenance> {
        self.records
            .iter()
            .find(|r| &r.index == k && r.coord == coord)
            .map(|r| r.provenance)
    }

    pub fn is_obstructed(&self) -> bool {
        !self.obstructions.is_empty()
    }
}

/// `[outer ∘ inner]_d` as a vector series.
fn slice_of<S: Scalar>(
    composer: &mut SliceComposer<S>,
    outer: &SeriesVector<S>,
    inner: &SeriesVector<S>,
    d: u32,
) -> Result<SeriesVector<S>> {
    let (n, big_n) = (inner.dim(), inner.max_degree());
    let comps = outer
        .components()
        .iter()
        .map(|c| TruncatedSeries::from_terms(n, big_n, composer.slice(c, inner, d)))
        .collect::<Result<Vec<_>>>()?;
    SeriesVector::new(comps)
}

/// Threshold below which an assembled coefficient counts as zero.
fn negligible<S: Scalar>(x: &S, scale: f64, tau: f64) -> bool {
    if S::MODE == crate::scalar::Mode::Exact {
        x.is_zero()
    } else {
        x.modulus() <= tau * scale.max(1.0)
    }
}

fn slice_scale<S: Scalar>(rhs: &SeriesVector<S>, d: u32) -> f64 {
    rhs.components()
        .iter()
        .flat_map(|c| c.degree_slice(d).map(|(_, v)| v.modulus()))
        .fold(0.0, f64::max)
}

fn near_warning<S: Scalar>(div: &S, tau: f64, k: &MultiIndex, j: usize, warnings: &mut Vec<String>) {
    if S::MODE == crate::scalar::Mode::Float && div.modulus() <= 10.0 * tau {
        warnings.push(format!(
            "near-resonance at k = {k}, coordinate {}: |λ^k − λ_j| = {:e}",
            j + 1,
            div.modulus()
        ));
    }
}

pub fn solve_linearization<S: Scalar>(f: &Germ<S>) -> Result<LinearizationResult<S>> {
    solve_with_order(f, |_| {})
}

/// The sweep with a hook that may permute the indices inside each degree.
pub(crate) fn solve_with_order<S: Scalar>(
    f: &Germ<S>,
    mut reorder: impl FnMut(&mut Vec<MultiIndex>),
) -> Result<LinearizationResult<S>> {
    if !f.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let (n, s, big_n) = (f.n(), f.s(), f.max_degree());
    let spec = f.spectrum();
    let tau = spec.tolerance();
    let mut powers = Powers::new(f.lambda());
    let mut psi = SeriesVector::identity(n, big_n);
    let mut records = Vec::new();
    let mut obstructions = Vec::new();
    let mut warnings = Vec::new();

    let mut composer = SliceComposer::new();
    for d in 2..=big_n {
        let rhs = slice_of(&mut composer, f.tail(), &psi, d)?;
        let scale = slice_scale(&rhs, d);
        let mut indices = MultiIndex::of_degree(n, d);
        reorder(&mut indices);
        for k in indices {
            let class = spec.classify(&k);
            let lk = powers.get(&k);
            for j in 0..n {
                let r = rhs.component(j).get(&k);
                let div = lk.clone() - &f.lambda()[j];
                let resonant = spec.is_resonant(&k, j);
                let (value, prov) = match class {
                    IndexClass::K2 => (S::zero(), Provenance::ForcedZeroK2),
                    IndexClass::K1(_) if j < s => (S::zero(), Provenance::ForcedZeroK1),
                    IndexClass::K1(_) => {
                        let fk = f.tail().component(j).get(&k);
                        if resonant {
                            (S::zero(), Provenance::ForcedZeroResonant)
                        } else {
                            near_warning(&div, tau, &k, j, &mut warnings);
                            let inv = div.inv().ok_or(Error::ZeroDivisor { index: k.clone(), coord: j + 1 })?;
                            let diff = r.clone() - &fk;
                            if !negligible(&diff, scale, tau) {
                                // the assembled coefficient is not f_k: χ-terms contribute
                                obstructions.push(Obstruction {
                                    index: k.clone(),
                                    coord: j,
                                    coefficient: diff,
                                    provenance: Provenance::ResonantFormula,
                                });
                            }
                            (fk * &inv, Provenance::ResonantFormula)
                        }
                    }
                    IndexClass::Interior if resonant => (S::zero(), Provenance::ForcedZeroResonant),
                    IndexClass::Interior => {
                        near_warning(&div, tau, &k, j, &mut warnings);
                        let inv = div.inv().ok_or(Error::ZeroDivisor { index: k.clone(), coord: j + 1 })?;
                        (r.clone() * &inv, Provenance::Solved)
                    }
                };
                let forced = matches!(
                    prov,
                    Provenance::ForcedZeroK1 | Provenance::ForcedZeroK2 | Provenance::ForcedZeroResonant
                );
                if forced && !negligible(&r, scale, tau) {
                    obstructions.push(Obstruction {
                        index: k.clone(),
                        coord: j,
                        coefficient: r.clone(),
                        provenance: prov,
                    });
                }
                psi.component_mut(j).set(k.clone(), value);
                records.push(Record {
                    index: k.clone(),
                    coord: j,
                    provenance: prov,
                    rhs: r,
                });
            }
        }
    }
    records.sort_by(|a, b| a.index.cmp(&b.index).then(a.coord.cmp(&b.coord)));
    obstructions.sort_by(|a, b| a.index.cmp(&b.index).then(a.coord.cmp(&b.coord)));
    let defect = conjugacy_defect(f, &psi)?;
    Ok(LinearizationResult {
        psi,
        records,
        obstructions,
        residual: defect.absolute,
        relative_residual: defect.relative,
        warnings,
    })
}

/// `max_{|k| ≤ N} ‖[f∘ψ − ψ∘Λ]_k‖_∞`.
pub fn verify_conjugacy<S: Scalar>(f: &Germ<S>, psi: &SeriesVector<S>) -> Result<f64> {
    Ok(conjugacy_defect(f, psi)?.absolute)
}

/// Size of `f∘ψ − ψ∘Λ`, absolute and relative to the coefficients involved.
#[derive(Clone, Debug, Serialize)]
pub struct Defect {
    pub absolute: f64,
    /// `max_k |d_k| / max(1, |[f∘ψ]_k|, |[ψ∘Λ]_k|)`, the figure double
    /// precision can actually certify when coefficients grow.
    pub relative: f64,
    /// Absolute defect per degree, index `d − 1` for `d = 1..N`.
    pub by_degree: Vec<f64>,
}

pub fn conjugacy_defect<S: Scalar>(f: &Germ<S>, psi: &SeriesVector<S>) -> Result<Defect> {
    if psi.dim() != f.n() || psi.max_degree() != f.max_degree() {
        return Err(Error::Shape("ψ and f differ in n or N".into()));
    }
    let lhs = f.map().compose(psi)?;
    let mut powers = Powers::new(f.lambda());
    let rhs = psi.precompose_diagonal(|k| powers.get(k));
    Ok(defect_between(&lhs, &rhs))
}

fn defect_between<S: Scalar>(lhs: &SeriesVector<S>, rhs: &SeriesVector<S>) -> Defect {
    let mut out = Defect {
        absolute: 0.0,
        relative: 0.0,
        by_degree: vec![0.0; lhs.max_degree() as usize],
    };
    for (a, b) in lhs.components().iter().zip(rhs.components()) {
        let mut keys: Vec<&MultiIndex> = a.terms().map(|t| t.0).chain(b.terms().map(|t| t.0)).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let (x, y) = (a.get(k), b.get(k));
            let d = (x.clone() - &y).modulus();
            let scale = 1f64.max(x.modulus()).max(y.modulus());
            out.absolute = out.absolute.max(d);
            out.relative = out.relative.max(d / scale);
            if k.degree() >= 1 {
                let slot = &mut out.by_degree[k.degree() as usize - 1];
                *slot = slot.max(d);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct NormalFormResult<S: Scalar> {
    /// The normal form, linear part included.
    pub g: SeriesVector<S>,
    pub phi: SeriesVector<S>,
    pub residual: f64,
    pub relative_residual: f64,
    /// Every stored index of `ĝ` is resonant for its coordinate.
    pub resonant_support: bool,
    pub warnings: Vec<String>,
}

impl<S: Scalar> NormalFormResult<S> {
    /// Whether `g` is the linear part alone.
    pub fn is_linear(&self) -> bool {
        self.g.components().iter().all(|c| c.terms().all(|(k, _)| k.degree() <= 1))
    }
}

/// Poincaré–Dulac: `f∘φ = φ∘g` with `ĝ` supported on resonant monomials.
///
/// At degree `d`, `(λ̃^k − λ̃_j)φ_{k,j} + g_{k,j} = [f̂∘φ − (φ̂∘g − φ̂∘Λ)]_{k,j}`,
/// where the right side only involves lower degrees.
pub fn poincare_dulac<S: Scalar>(f: &Germ<S>) -> Result<NormalFormResult<S>> {
    if !f.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let (n, big_n) = (f.n(), f.max_degree());
    let spec = f.spectrum();
    let tau = spec.tolerance();
    let mut powers = Powers::new(f.lambda());
    let lin = SeriesVector::diagonal(f.lambda(), big_n);
    let mut phi = SeriesVector::identity(n, big_n);
    let mut phi_hat = SeriesVector::zero(n, big_n);
    let mut g = lin.clone();
    let mut warnings = Vec::new();

    let (mut over_phi, mut over_g) = (SliceComposer::new(), SliceComposer::new());
    for d in 2..=big_n {
        // φ̂∘Λ only has degrees below d here, so it drops out of the slice
        let a = slice_of(&mut over_phi, f.tail(), &phi, d)?;
        let b = slice_of(&mut over_g, &phi_hat, &g, d)?;
        let rhs = a.sub(&b)?;
        let scale = slice_scale(&rhs, d);
        for k in MultiIndex::of_degree(n, d) {
            let lk = powers.get(&k);
            for j in 0..n {
                let r = rhs.component(j).get(&k);
                if spec.is_resonant(&k, j) {
                    if !negligible(&r, scale, tau) {
                        g.component_mut(j).set(k.clone(), r);
                    }
                } else {
                    let div = lk.clone() - &f.lambda()[j];
                    near_warning(&div, tau, &k, j, &mut warnings);
                    let inv = div.inv().ok_or(Error::ZeroDivisor { index: k.clone(), coord: j + 1 })?;
                    let v = r * &inv;
                    phi.component_mut(j).set(k.clone(), v.clone());
                    phi_hat.component_mut(j).set(k.clone(), v);
                }
            }
        }
    }
    let resonant_support = (0..n).all(|j| {
        g.component(j)
            .terms()
            .filter(|(k, _)| k.degree() >= 2)
            .all(|(k, _)| spec.is_resonant(k, j))
    });
    let defect = defect_between(&f.map().compose(&phi)?, &phi.compose(&g)?);
    Ok(NormalFormResult {
        g,
        phi,
        residual: defect.absolute,
        relative_residual: defect.relative,
        resonant_support,
        warnings,
    })
}

/// `(Σψ_m w^m)^l` has the form `w^l` plus terms with `ord_u ≥ 2`.
pub fn k1_substitution_holds<S: Scalar>(psi: &SeriesVector<S>, s: usize, l: &MultiIndex) -> bool {
    let n = psi.dim();
    let mut mono = TruncatedSeries::constant(n, psi.max_degree(), S::one());
    for (i, &e) in l.exponents().iter().enumerate() {
        for _ in 0..e {
            mono = mono.mul(psi.component(i)).expect("same shape");
        }
    }
    let ok = mono.terms().all(|(k, v)| {
        if k == l {
            *v == S::one()
        } else {
            k.head_weight(s) >= 2
        }
    });
    ok
}

#[derive(Clone, Debug, Serialize)]
pub struct OsculatingReport {
    pub invariant: bool,
    pub osculating: bool,
    pub restriction_linear: bool,
    /// `ord_x` of each tail component, coordinates `1..n`.
    pub ord_x: Vec<OrdX>,
    /// Set when a Jordan flag couples `x_s` to `y_1`.
    pub coupling_flag: bool,
}

/// Read the conditions of the osculating normal form off the truncated tail.
pub fn check_osculating_form<S: Scalar>(f: &Germ<S>) -> OsculatingReport {
    let s = f.s();
    let ord_x: Vec<OrdX> = f.tail().components().iter().map(|c| c.ord_x(s)).collect();
    // ε_s multiplies x_{s+1} = y_1 in the equation for x_s.
    let coupling_flag = s < f.n() && f.epsilon().get(s - 1) == Some(&1);
    let invariant = !coupling_flag && ord_x[..s].iter().all(|o| o.at_least(1));
    let osculating = !coupling_flag && ord_x[..s].iter().all(|o| o.at_least(2));
    let restriction_linear = ord_x[s..].iter().all(|o| o.at_least(1));
    OsculatingReport {
        invariant,
        osculating,
        restriction_linear,
        ord_x,
        coupling_flag,
    }
}
