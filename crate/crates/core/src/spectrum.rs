//! Eigenvalue tuples: resonances, the small-divisor functions `ω_s` and `ω̃`,
//! and finite-horizon Brjuno sums.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::polar::{ComplexValue, ExactPolar, LogPolar};
use crate::scalar::Mode;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Default threshold for the "diverging-at-horizon" label.
pub const DEFAULT_DIVERGENCE_THRESHOLD: f64 = 1.0;

/// Where a multi-index sits relative to the split `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexClass {
    /// `k₁+⋯+k_s ≥ 2`.
    Interior,
    /// `K₁^p`: one unit of weight at head position `p` (0-based).
    K1(usize),
    /// Pure tail index.
    K2,
}

/// `λ̃ = (λ₁,…,λ_s, μ₁,…,μ_r)` in a single arithmetic mode.
#[derive(Clone, Debug)]
pub struct Spectrum {
    s: usize,
    values: Vec<ComplexValue>,
    logs: Vec<LogPolar>,
    mode: Mode,
    tolerance: f64,
}

impl Spectrum {
    pub fn new(values: Vec<ComplexValue>, s: usize) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::Invalid("empty spectrum".into()));
        }
        if s == 0 || s > n {
            return Err(Error::Invalid(format!("split s = {s} must satisfy 1 ≤ s ≤ n = {n}")));
        }
        if values.iter().any(ComplexValue::is_zero) {
            return Err(Error::Invalid("eigenvalues must be nonzero".into()));
        }
        if let ComplexValue::Float(z) = values.iter().find(|v| !v.is_exact()).unwrap_or(&values[0]) {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Invalid("eigenvalues must be finite".into()));
            }
        }
        let exact = values.iter().filter(|v| v.is_exact()).count();
        let mode = if exact == n {
            Mode::Exact
        } else if exact == 0 {
            Mode::Float
        } else {
            return Err(Error::Invalid("eigenvalues mix exact and float forms".into()));
        };
        let logs = values.iter().map(LogPolar::from_value).collect();
        Ok(Spectrum {
            s,
            values,
            logs,
            mode,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn exact(values: Vec<ExactPolar>, s: usize) -> Result<Self> {
        Self::new(values.into_iter().map(ComplexValue::Polar).collect(), s)
    }

    pub fn float(values: Vec<Complex64>, s: usize) -> Result<Self> {
        Self::new(values.into_iter().map(ComplexValue::Float).collect(), s)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {tolerance}")));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.n() - self.s
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    pub fn log(&self, j: usize) -> &LogPolar {
        &self.logs[j]
    }

    /// `λ̃^k`.
    pub fn power(&self, k: &MultiIndex) -> LogPolar {
        let mut acc = LogPolar::one_like(self.mode == Mode::Exact);
        for (i, &e) in k.exponents().iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.logs[i].pow(e));
            }
        }
        acc
    }

    /// `ln|p − λ̃_j|`.
    pub fn ln_divisor(&self, p: &LogPolar, j: usize) -> f64 {
        p.ln_abs_diff(&self.logs[j])
    }

    /// Whether two values count as equal: exactly, or within `τ` in float mode.
    pub fn coincide(&self, a: &LogPolar, b: &LogPolar) -> bool {
        match a.exact_eq(b) {
            Some(eq) => eq,
            None => a.ln_abs_diff(b) <= self.tolerance.ln(),
        }
    }

    pub fn is_resonant(&self, k: &MultiIndex, j: usize) -> bool {
        self.coincide(&self.power(k), &self.logs[j])
    }

    pub fn classify(&self, k: &MultiIndex) -> IndexClass {
        let exps = &k.exponents()[..self.s];
        match k.head_weight(self.s) {
            0 => IndexClass::K2,
            1 => IndexClass::K1(exps.iter().position(|&e| e == 1).unwrap()),
            _ => IndexClass::Interior,
        }
    }

    /// The head spectrum `(λ₁,…,λ_s)` alone, with split `s`.
    pub fn head(&self) -> Spectrum {
        Spectrum {
            s: self.s,
            values: self.values[..self.s].to_vec(),
            logs: self.logs[..self.s].to_vec(),
            mode: self.mode,
            tolerance: self.tolerance,
        }
    }

    fn one(&self) -> LogPolar {
        LogPolar::one_like(self.mode == Mode::Exact)
    }

    /// Visit `(k, λ̃^k)` for `lo ≤ |k| ≤ hi` in graded-lex order, building each
    /// power from the previous degree layer.
    pub fn for_each_power(&self, lo: u32, hi: u32, mut f: impl FnMut(&MultiIndex, &LogPolar) -> Result<()>) -> Result<()> {
        let n = self.n();
        let mut prev: HashMap<MultiIndex, LogPolar> = HashMap::new();
        prev.insert(MultiIndex::zero(n), self.one());
        for d in 1..=hi {
            let mut layer = HashMap::with_capacity(prev.len() * 2);
            for k in MultiIndex::of_degree(n, d) {
                let i = k.last_nonzero().unwrap();
                let below = k.with_component(i, k.get(i) - 1);
                let p = prev[&below].mul(&self.logs[i]);
                if d >= lo {
                    f(&k, &p)?;
                }
                layer.insert(k, p);
            }
            prev = layer;
        }
        Ok(())
    }
}

/// A multi-index with a 1-based coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub index: MultiIndex,
    pub coord: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoResonances,
    LevelSOnly,
    ViolatesLevelS,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::NoResonances => "no-resonances",
            Verdict::LevelSOnly => "level-s-only",
            Verdict::ViolatesLevelS => "violates-level-s",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NearResonance {
    pub index: MultiIndex,
    pub coord: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResonanceReport {
    pub degree_bound: u32,
    pub split: usize,
    /// `Res_j` for `j = 1..n`.
    pub resonant: Vec<Vec<MultiIndex>>,
    pub k1_tilde: Vec<MultiIndex>,
    pub k2_tilde: Vec<MultiIndex>,
    /// Size of `K₁^p` within the range, `p = 1..s`.
    pub k1_sizes: Vec<usize>,
    pub k2_size: usize,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub near_resonances: Vec<NearResonance>,
}

impl ResonanceReport {
    pub fn is_resonant(&self, k: &MultiIndex, coord: usize) -> bool {
        self.resonant[coord - 1].binary_search(k).is_ok()
    }

    pub fn total(&self) -> usize {
        self.resonant.iter().map(Vec::len).sum()
    }
}

pub fn enumerate_resonances(spec: &Spectrum, m: u32) -> Result<ResonanceReport> {
    if m < 2 {
        return Err(Error::Invalid(format!("degree bound must be at least 2, got {m}")));
    }
    let (n, s) = (spec.n(), spec.s());
    let ln_tau = spec.tolerance().ln();
    let ln_warn = (10.0 * spec.tolerance()).ln();
    let mut resonant = vec![Vec::new(); n];
    let mut near = Vec::new();
    let mut k1_tilde = Vec::new();
    let mut k2_tilde = Vec::new();
    let mut k1_sizes = vec![0; s];
    let mut k2_size = 0;
    let mut witness = None;

    spec.for_each_power(2, m, |k, p| {
        let tail = tail_power(spec, k);
        let class = spec.classify(k);
        let in_k1t = matches!(class, IndexClass::K1(_)) && spec.coincide(&tail, &spec.one());
        let in_k2t = class == IndexClass::K2 && (s..n).any(|j| spec.coincide(&tail, spec.log(j)));
        match class {
            IndexClass::K1(q) => k1_sizes[q] += 1,
            IndexClass::K2 => k2_size += 1,
            IndexClass::Interior => {}
        }
        if in_k1t {
            k1_tilde.push(k.clone());
        }
        if in_k2t {
            k2_tilde.push(k.clone());
        }
        for j in 0..n {
            let res = spec.coincide(p, spec.log(j));
            if res {
                resonant[j].push(k.clone());
                let allowed = if j < s { in_k1t } else { in_k2t };
                if !allowed && witness.is_none() {
                    witness = Some(Witness { index: k.clone(), coord: j + 1 });
                }
            } else if spec.mode() == Mode::Float {
                let l = spec.ln_divisor(p, j);
                if l > ln_tau && l <= ln_warn {
                    near.push(NearResonance { index: k.clone(), coord: j + 1, distance: l.exp() });
                }
            }
        }
        Ok(())
    })?;

    let any = resonant.iter().any(|r| !r.is_empty());
    let verdict = if witness.is_some() {
        Verdict::ViolatesLevelS
    } else if any {
        Verdict::LevelSOnly
    } else {
        Verdict::NoResonances
    };
    Ok(ResonanceReport {
        degree_bound: m,
        split: s,
        resonant,
        k1_tilde,
        k2_tilde,
        k1_sizes,
        k2_size,
        verdict,
        witness,
        near_resonances: near,
    })
}

/// `μ^{(k_{s+1},…,k_n)}`.
fn tail_power(spec: &Spectrum, k: &MultiIndex) -> LogPolar {
    let mut acc = spec.one();
    for (i, &e) in k.exponents().iter().enumerate().skip(spec.s()) {
        if e > 0 {
            acc = acc.mul(&spec.log(i).pow(e));
        }
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaEntry {
    pub m: u32,
    pub ln_value: f64,
    pub value: f64,
    pub witness: Option<Witness>,
}

/// `ω_s(m)` and `ω̃(m)` for `2 ≤ m ≤ m_max`.
#[derive(Clone, Debug, Serialize)]
pub struct OmegaTable {
    pub m_max: u32,
    /// Absent when only `ω̃` was requested.
    pub partial: Option<Vec<OmegaEntry>>,
    pub reduced: Vec<OmegaEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Partial,
    Reduced,
}

impl OmegaTable {
    pub fn column(&self, which: Which) -> Result<&[OmegaEntry]> {
        match which {
            Which::Reduced => Ok(&self.reduced),
            Which::Partial => self
                .partial
                .as_deref()
                .ok_or_else(|| Error::Invalid("table was built without the ω_s column".into())),
        }
    }

    /// `ln ω(m)` from the chosen column.
    pub fn ln_at(&self, which: Which, m: u32) -> Result<f64> {
        if m < 2 || m > self.m_max {
            return Err(Error::OutOfRange {
                needed: m as u64,
                available: self.m_max as u64,
            });
        }
        Ok(self.column(which)?[(m - 2) as usize].ln_value)
    }
}

struct RunningMin {
    ln: f64,
    witness: Option<Witness>,
}

impl RunningMin {
    fn new() -> Self {
        RunningMin { ln: f64::INFINITY, witness: None }
    }

    fn offer(&mut self, ln: f64, k: &MultiIndex, j: usize) {
        if ln < self.ln {
            self.ln = ln;
            self.witness = Some(Witness { index: k.clone(), coord: j + 1 });
        }
    }

    fn entry(&self, m: u32) -> OmegaEntry {
        OmegaEntry {
            m,
            ln_value: self.ln,
            value: self.ln.exp(),
            witness: self.witness.clone(),
        }
    }
}

/// Both columns; fails if `ω_s` meets a zero divisor.
pub fn omega_tables(spec: &Spectrum, m_max: u32) -> Result<OmegaTable> {
    build_omega(spec, m_max, true)
}

/// Only `ω̃`, which is defined for every spectrum.
pub fn reduced_omega_table(spec: &Spectrum, m_max: u32) -> Result<OmegaTable> {
    build_omega(spec, m_max, false)
}

fn build_omega(spec: &Spectrum, m_max: u32, with_partial: bool) -> Result<OmegaTable> {
    if m_max < 2 {
        return Err(Error::Invalid(format!("m_max must be at least 2, got {m_max}")));
    }
    let (n, s) = (spec.n(), spec.s());
    let mut part = RunningMin::new();
    let mut red = RunningMin::new();
    let mut partial = Vec::new();
    let mut reduced = Vec::new();
    let mut current = 2;
    spec.for_each_power(2, m_max, |k, p| {
        if k.degree() != current {
            partial.push(part.entry(current));
            reduced.push(red.entry(current));
            current = k.degree();
        }
        let head_only = k.tail_weight(s) == 0;
        for j in 0..n {
            let res = spec.coincide(p, spec.log(j));
            let ln = spec.ln_divisor(p, j);
            if with_partial && head_only {
                if res {
                    return Err(Error::ZeroDivisor { index: k.clone(), coord: j + 1 });
                }
                part.offer(ln, k, j);
            }
            if !res {
                red.offer(ln, k, j);
            }
        }
        Ok(())
    })?;
    partial.push(part.entry(current));
    reduced.push(red.entry(current));
    Ok(OmegaTable {
        m_max,
        partial: with_partial.then_some(partial),
        reduced,
    })
}

/// `{p_ν}` for Brjuno sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sequence {
    PowersOfTwo,
    List(Vec<u64>),
}

impl Sequence {
    /// `p_0, …, p_len−1`, validated.
    pub fn take(&self, len: usize) -> Result<Vec<u64>> {
        match self {
            Sequence::PowersOfTwo => {
                if len > 63 {
                    return Err(Error::Invalid("powers of two beyond 2^62".into()));
                }
                Ok((0..len).map(|v| 1u64 << v).collect())
            }
            Sequence::List(v) => {
                if v.first() != Some(&1) {
                    return Err(Error::Invalid("sequence must start with p_0 = 1".into()));
                }
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Invalid("sequence must be strictly increasing".into()));
                }
                if v.len() < len {
                    return Err(Error::Invalid(format!(
                        "sequence has {} terms but {len} are needed",
                        v.len()
                    )));
                }
                Ok(v[..len].to_vec())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BrjunoVerdict {
    PlausiblyFinite,
    DivergingAtHorizon,
}

impl BrjunoVerdict {
    pub fn name(self) -> &'static str {
        match self {
            BrjunoVerdict::PlausiblyFinite => "plausibly-finite",
            BrjunoVerdict::DivergingAtHorizon => "diverging-at-horizon",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BrjunoSumEstimate {
    pub which: Which,
    pub horizon: usize,
    /// `p_0, …, p_{horizon+1}`.
    pub sequence: Vec<u64>,
    /// `p_ν^{-1} log ω(p_{ν+1})^{-1}` for `ν = 0..=horizon`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub threshold: f64,
    /// How many trailing terms the verdict inspects.
    pub tail_len: usize,
    pub verdict: BrjunoVerdict,
}

/// Finite-horizon Brjuno sum. The verdict is a heuristic: "diverging-at-horizon"
/// when each of the last `max(1, ⌈horizon/3⌉)` terms is at least `threshold`.
pub fn brjuno_sum(
    table: &OmegaTable,
    which: Which,
    sequence: &Sequence,
    horizon: usize,
    threshold: f64,
) -> Result<BrjunoSumEstimate> {
    let p = sequence.take(horizon + 2)?;
    let needed = p[horizon + 1];
    if needed > table.m_max as u64 {
        return Err(Error::OutOfRange {
            needed,
            available: table.m_max as u64,
        });
    }
    let mut terms = Vec::with_capacity(horizon + 1);
    let mut partial_sums = Vec::with_capacity(horizon + 1);
    let mut acc = 0.0;
    for nu in 0..=horizon {
        let ln_w = table.ln_at(which, p[nu + 1] as u32)?;
        let t = -ln_w / p[nu] as f64;
        acc += t;
        terms.push(t);
        partial_sums.push(acc);
    }
    let tail_len = horizon.div_ceil(3).max(1);
    let verdict = if terms[terms.len() - tail_len..].iter().all(|&t| t >= threshold) {
        BrjunoVerdict::DivergingAtHorizon
    } else {
        BrjunoVerdict::PlausiblyFinite
    };
    Ok(BrjunoSumEstimate {
        which,
        horizon,
        sequence: p,
        terms,
        partial_sums,
        threshold,
        tail_len,
        verdict,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionRow {
    pub p: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    pub shift: u64,
    pub exponent: f64,
    pub rows: Vec<ReductionRow>,
    pub holds: bool,
    pub first_violation: Option<u64>,
    /// Every checked row satisfied the inequality with equality.
    pub equality: bool,
    /// `q_j = p_{ν₀+j} − k`, with `ν₀` the first index where `p_ν > k`.
    pub derived_sequence: Vec<u64>,
}

/// Check `ω̃(p_ν − k) ≥ ω_s(p_ν)^α` for every `p_ν > k` with `ν ≤ horizon`.
pub fn check_reduction_lemma(
    spec: &Spectrum,
    shift: u64,
    exponent: f64,
    sequence: &Sequence,
    horizon: usize,
) -> Result<ReductionReport> {
    if exponent < 1.0 {
        return Err(Error::Invalid(format!("exponent must be at least 1, got {exponent}")));
    }
    let p = sequence.take(horizon + 1)?;
    let top = p[horizon].max(2) as u32;
    let report = enumerate_resonances(spec, top)?;
    if report.verdict == Verdict::ViolatesLevelS {
        return Err(Error::Invalid(format!(
            "spectrum has a resonance outside level s at {}",
            report.witness.as_ref().map(|w| w.index.to_string()).unwrap_or_default()
        )));
    }
    let table = omega_tables(spec, top)?;
    let mut rows = Vec::new();
    let mut first_violation = None;
    let mut equality = true;
    for &pv in &p {
        if pv <= shift || pv - shift < 2 || pv < 2 {
            continue;
        }
        let ln_l = table.ln_at(Which::Reduced, (pv - shift) as u32)?;
        let ln_r = exponent * table.ln_at(Which::Partial, pv as u32)?;
        let holds = ln_l >= ln_r - 1e-12 * ln_r.abs().max(1.0);
        equality &= ln_l == ln_r;
        if !holds && first_violation.is_none() {
            first_violation = Some(pv);
        }
        rows.push(ReductionRow { p: pv, lhs: ln_l.exp(), rhs: ln_r.exp(), holds });
    }
    let derived_sequence = p.iter().filter(|&&v| v > shift).map(|&v| v - shift).collect();
    Ok(ReductionReport {
        shift,
        exponent,
        holds: first_violation.is_none(),
        equality: equality && !rows.is_empty(),
        rows,
        first_violation,
        derived_sequence,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerLawFit {
    /// `β` in `ω(m) ≈ C·m^{−β}`.
    pub exponent: f64,
    pub ln_prefactor: f64,
    pub points: usize,
}

/// Least-squares fit of `ln ω(m)` against `ln m` over the finite entries.
pub fn fit_power_law(entries: &[OmegaEntry]) -> Option<PowerLawFit> {
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| e.ln_value.is_finite())
        .map(|e| ((e.m as f64).ln(), e.ln_value))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(PowerLawFit {
        exponent: -slope,
        ln_prefactor: my - slope * mx,
        points: pts.len(),
    })
}
