//! The majorant machinery behind the convergence argument: normalization,
//! the divisors `ε_k`, the `α_j` and `δ_k` recursions, the counting function
//! `N^j_m(k)` and the coefficient growth checks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linearizer::{Germ, LinearizationResult};
use crate::polar::ln_bigint;
use crate::scalar::Scalar;
use crate::series::{coeff_norm, SeriesVector};
use crate::spectrum::{IndexClass, OmegaTable, Sequence, Spectrum, Which};

/// Slack for the domination check `‖ψ_k‖ ≤ α_{|k|}δ_k`.
pub const DOMINATION_SLACK: f64 = 1e-9;
/// Largest table `delta_table` builds without an explicit override:
/// the size of `n = 3, N = 12`.
pub const DELTA_ENTRY_CAP: usize = 455;

/// `g(z) = Q f(z/Q)` together with `Q`.
#[derive(Clone, Debug)]
pub struct Normalized<S: Scalar> {
    pub germ: Germ<S>,
    pub q: f64,
    pub q_scalar: S,
}

/// Rescale so that every `‖g_l‖ ≤ 1`; `g_l = f_l Q^{1−|l|}` with
/// `Q = max(1, P²)`, `P = max ‖f_l‖^{1/|l|}`.
pub fn normalize_germ<S: Scalar>(f: &Germ<S>) -> Result<Normalized<S>> {
    let tail = f.tail();
    let mut p2: f64 = 0.0;
    for l in tail.support() {
        let norm = coeff_norm(&tail.coefficient(&l));
        let d = l.degree() as f64;
        // ‖f_l‖^{2/|l|}, read off directly when |l| = 2
        let v = if l.degree() == 2 { norm } else { norm.powf(2.0 / d) };
        p2 = p2.max(v);
    }
    let mut q = p2.max(1.0);
    loop {
        let q_scalar = S::from_f64(q);
        let g = scale_tail(tail, &q_scalar, |d| 1 - d as i32)?;
        let fits = g.support().iter().all(|l| coeff_norm(&g.coefficient(l)) <= 1.0);
        if fits || q == 1.0 {
            return Ok(Normalized {
                germ: f.with_tail(g)?,
                q,
                q_scalar,
            });
        }
        // rounding left some ‖g_l‖ a hair above 1
        q *= 1.0 + f64::EPSILON * 64.0;
    }
}

/// Multiply the degree-`d` slice by `q^{e(d)}`.
pub fn scale_tail<S: Scalar>(v: &SeriesVector<S>, q: &S, e: impl Fn(u32) -> i32) -> Result<SeriesVector<S>> {
    let inv = q.inv().ok_or_else(|| Error::Invalid("scale must be nonzero".into()))?;
    let mut cache: HashMap<i32, S> = HashMap::new();
    let mut power = |p: i32| -> S {
        cache
            .entry(p)
            .or_insert_with(|| {
                let base = if p < 0 { &inv } else { q };
                (0..p.unsigned_abs()).fold(S::one(), |acc, _| acc * base)
            })
            .clone()
    };
    let comps = v
        .components()
        .iter()
        .map(|c| c.map_coeffs(|k, x| x.clone() * &power(e(k.degree()))))
        .collect();
    SeriesVector::new(comps)
}

/// `ε_k` and the coordinate `i_k` attaining it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisorDatum {
    pub k: MultiIndex,
    pub epsilon: f64,
    pub ln_epsilon: f64,
    /// 1-based coordinate.
    pub i_k: usize,
}

/// `ε_k = min_i |λ̃^k − λ̃_i|`, restricted to the tail coordinates when
/// `k ∈ K₁`. Ties go to the smallest coordinate.
pub fn epsilon_of(spec: &Spectrum, k: &MultiIndex) -> Result<DivisorDatum> {
    let power = spec.power(k);
    epsilon_from_power(spec, k, &power)
}

fn epsilon_from_power(spec: &Spectrum, k: &MultiIndex, power: &crate::polar::LogPolar) -> Result<DivisorDatum> {
    if k.dim() != spec.n() {
        return Err(Error::Shape(format!("index {k} has dimension {}, spectrum {}", k.dim(), spec.n())));
    }
    if k.degree() < 2 {
        return Err(Error::Invalid(format!("ε_k needs |k| ≥ 2, got {k}")));
    }
    let range = match spec.classify(k) {
        IndexClass::K2 => return Err(Error::InK2(k.clone())),
        IndexClass::K1(_) => spec.s()..spec.n(),
        IndexClass::Interior => 0..spec.n(),
    };
    let mut best: Option<(f64, usize)> = None;
    for i in range {
        let ln = spec.ln_divisor(power, i);
        if best.is_none_or(|(b, _)| ln < b) {
            best = Some((ln, i));
        }
    }
    let (ln, i) = best.ok_or_else(|| Error::Invalid(format!("no admissible coordinate for {k}")))?;
    Ok(DivisorDatum {
        k: k.clone(),
        epsilon: ln.exp(),
        ln_epsilon: ln,
        i_k: i + 1,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Theta {
    pub value: f64,
    pub ln_value: f64,
    pub min_modulus: f64,
    /// `min|λ̃_h| > 1`: the estimates expect `f` to be replaced by `f^{-1}`.
    pub inversion_advised: bool,
}

/// `θ = min_h |λ̃_h| / 4`.
pub fn theta_of(spec: &Spectrum) -> Theta {
    let ln_min = (0..spec.n())
        .map(|h| spec.log(h).ln_modulus())
        .fold(f64::INFINITY, f64::min);
    let ln_value = ln_min - 4f64.ln();
    Theta {
        value: ln_value.exp(),
        ln_value,
        min_modulus: ln_min.exp(),
        inversion_advised: ln_min > 0.0,
    }
}

/// `α_1, …, α_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSequence {
    values: Vec<BigInt>,
}

impl AlphaSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `α_j` for `j ≥ 1`.
    pub fn get(&self, j: usize) -> &BigInt {
        &self.values[j - 1]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn ln(&self, j: usize) -> f64 {
        ln_bigint(self.get(j))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect()
    }
}

/// `α_j = Σ_{ν≥2} (α^{*ν})_j`, `α_1 = 1`.
pub fn alpha_sequence(len: usize) -> Result<AlphaSequence> {
    if len == 0 {
        return Err(Error::Invalid("alpha_sequence needs J ≥ 1".into()));
    }
    // pw[ν][j] = coefficient of t^j in α^ν, filled column by column
    let mut alpha = vec![BigInt::zero(); len + 1];
    alpha[1] = BigInt::one();
    let mut pw: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); len + 1]; len + 1];
    pw[1][1] = BigInt::one();
    for j in 2..=len {
        let mut total = BigInt::zero();
        for nu in 2..=j {
            let mut c = BigInt::zero();
            for i in 1..=j - (nu - 1) {
                if !pw[nu - 1][j - i].is_zero() {
                    c += &alpha[i] * &pw[nu - 1][j - i];
                }
            }
            total += &c;
            pw[nu][j] = c;
        }
        alpha[j] = total.clone();
        pw[1][j] = total;
    }
    Ok(AlphaSequence {
        values: alpha.into_iter().skip(1).collect(),
    })
}

/// Radius of the real branch: `(1+t)² − 8t ≥ 0` for `t ≤ 3 − 2√2`.
pub fn alpha_radius() -> f64 {
    3.0 - 2.0 * std::f64::consts::SQRT_2
}

/// `α(t) = ((1+t) − √((1+t)² − 8t)) / 4`, for `|t| ≤ 3 − 2√2`.
pub fn alpha_closed_form(t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > alpha_radius() {
        return Err(Error::Domain(t));
    }
    let disc = (1.0 + t) * (1.0 + t) - 8.0 * t;
    Ok(((1.0 + t) - disc.max(0.0).sqrt()) / 4.0)
}

/// The same branch at complex `z`, `|z| ≤ 3 − 2√2`.
pub fn alpha_closed_form_complex(z: Complex64) -> Result<Complex64> {
    if !(z.norm() <= alpha_radius()) {
        return Err(Error::Domain(z.norm()));
    }
    let one = Complex64::new(1.0, 0.0);
    let disc = (one + z) * (one + z) - 8.0 * z;
    Ok(((one + z) - disc.sqrt()) / 4.0)
}

/// `|α − t − α²/(1 − α)|` at `t`.
pub fn alpha_identity_defect(t: f64) -> Result<f64> {
    let a = alpha_closed_form(t)?;
    Ok((a - t - a * a / (1.0 - a)).abs())
}

/// Taylor coefficients `1..=len` of the closed form, exactly, from the
/// power series of `√(1 − 6t + t²)`.
pub fn closed_form_taylor_exact(len: usize) -> Vec<BigRational> {
    let q = |n: i64| BigRational::from_integer(BigInt::from(n));
    let poly = [q(1), q(-6), q(1)];
    let mut root = vec![q(1)];
    for n in 1..=len {
        let mut c = poly.get(n).cloned().unwrap_or_else(BigRational::zero);
        for i in 1..n {
            c -= &root[i] * &root[n - i];
        }
        root.push(c / q(2));
    }
    (1..=len)
        .map(|n| {
            let lin = if n == 1 { q(1) } else { q(0) };
            (lin - &root[n]) / q(4)
        })
        .collect()
}

/// Taylor coefficients `1..=len` by the trapezoid rule for the Cauchy integral
/// on `|t| = r` with `points` nodes.
pub fn closed_form_taylor_cauchy(len: usize, r: f64, points: usize) -> Result<Vec<f64>> {
    let samples = (0..points)
        .map(|m| alpha_closed_form_complex(Complex64::from_polar(r, std::f64::consts::TAU * m as f64 / points as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok((1..=len)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, v) in samples.iter().enumerate() {
                let phase = -std::f64::consts::TAU * ((j * m) % points) as f64 / points as f64;
                acc += v * Complex64::from_polar(1.0, phase);
            }
            acc.re / points as f64 / r.powi(j as i32)
        })
        .collect())
}

/// One row of the `δ` table.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaEntry {
    pub k: MultiIndex,
    pub class: IndexClass,
    pub divisor: DivisorDatum,
    pub ln_delta: f64,
    /// The maximizing `k = k_1 + ⋯ + k_ν`, largest part first; empty for `K₁`.
    pub parts: Vec<MultiIndex>,
    /// `l_0 = k, l_1, …, l_q` with `δ_k = Π ε_{l_i}^{-1}`.
    pub factors: Vec<MultiIndex>,
}

/// `δ_k` for `2 ≤ |k| ≤ N`, `k ∉ K₂`.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaTable {
    pub n: usize,
    pub split: usize,
    pub max_degree: u32,
    pub entries: BTreeMap<MultiIndex, DeltaEntry>,
}

impl DeltaTable {
    pub fn get(&self, k: &MultiIndex) -> Option<&DeltaEntry> {
        self.entries.get(k)
    }

    /// `ln δ_k`: `0` for units, `−∞` for `K₂`.
    pub fn ln_delta(&self, k: &MultiIndex) -> f64 {
        if k.degree() == 1 {
            return 0.0;
        }
        self.entries.get(k).map_or(f64::NEG_INFINITY, |e| e.ln_delta)
    }

    pub fn datum(&self, k: &MultiIndex) -> Option<&DivisorDatum> {
        self.entries.get(k).map(|e| &e.divisor)
    }

    /// Does every factor list have the shape `|k| > |l_1| ≥ ⋯ ≥ |l_q| ≥ 2`,
    /// no `K₂` member, and reproduce `ln δ_k`?
    pub fn factor_lists_valid(&self) -> std::result::Result<(), String> {
        for (k, e) in &self.entries {
            if e.factors.first() != Some(k) {
                return Err(format!("{k}: l_0 is not k"));
            }
            let tail = &e.factors[1..];
            if let Some(l1) = tail.first() {
                if l1.degree() >= k.degree() {
                    return Err(format!("{k}: |l_1| = {} is not below |k|", l1.degree()));
                }
            }
            if tail.windows(2).any(|w| w[0].degree() < w[1].degree()) {
                return Err(format!("{k}: tail degrees increase"));
            }
            let mut ln = 0.0;
            for l in &e.factors {
                let Some(d) = self.datum(l) else {
                    return Err(format!("{k}: factor {l} is not tabulated (K₂ or |l| < 2)"));
                };
                ln -= d.ln_epsilon;
            }
            if (ln - e.ln_delta).abs() > 1e-9 * ln.abs().max(1.0) {
                return Err(format!("{k}: factors give ln δ = {ln}, table has {}", e.ln_delta));
            }
            if e.factors.len() as u32 > 2 * k.degree() - 1 {
                return Err(format!("{k}: {} factors exceed 2|k| − 1", e.factors.len()));
            }
        }
        Ok(())
    }
}

/// Number of table rows for `n`, `N` before `K₂` is removed.
pub fn delta_table_rows(n: usize, max_degree: u32) -> usize {
    (2..=max_degree)
        .map(|d| binomial(d as usize + n - 1, n - 1))
        .sum()
}

/// A rough memory figure for the table, in bytes.
pub fn delta_table_bytes(n: usize, max_degree: u32) -> usize {
    let per_index = 24 + 4 * n;
    delta_table_rows(n, max_degree) * (160 + per_index * (2 * max_degree as usize + 2))
}

fn binomial(a: usize, b: usize) -> usize {
    (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1))
}

pub fn delta_table(spec: &Spectrum, max_degree: u32) -> Result<DeltaTable> {
    let rows = delta_table_rows(spec.n(), max_degree);
    if rows > DELTA_ENTRY_CAP {
        return Err(Error::Invalid(format!(
            "δ table would have {rows} rows (~{} KiB); the cap is {DELTA_ENTRY_CAP}, use delta_table_uncapped",
            delta_table_bytes(spec.n(), max_degree) / 1024
        )));
    }
    delta_table_uncapped(spec, max_degree)
}

/// Best product over decompositions of one index.
#[derive(Clone)]
struct Best {
    ln: f64,
    /// First part of the maximizing decomposition; `None` means `k` itself.
    split: Option<MultiIndex>,
}

pub fn delta_table_uncapped(spec: &Spectrum, max_degree: u32) -> Result<DeltaTable> {
    if max_degree < 2 {
        return Err(Error::Invalid(format!("δ table needs N ≥ 2, got {max_degree}")));
    }
    let n = spec.n();
    let mut entries: BTreeMap<MultiIndex, DeltaEntry> = BTreeMap::new();
    // ln of the best product over decompositions into ≥ 1 and ≥ 2 parts
    let mut any: HashMap<MultiIndex, Best> = HashMap::new();
    let ln_delta = |entries: &BTreeMap<MultiIndex, DeltaEntry>, k: &MultiIndex| -> f64 {
        if k.degree() == 1 {
            0.0
        } else {
            entries.get(k).map_or(f64::NEG_INFINITY, |e| e.ln_delta)
        }
    };
    spec.for_each_power(1, max_degree, |k, p| {
        if k.degree() == 1 {
            any.insert(k.clone(), Best { ln: 0.0, split: None });
            return Ok(());
        }
        let mut m = Best {
            ln: f64::NEG_INFINITY,
            split: None,
        };
        for a in k.proper_divisors() {
            let da = ln_delta(&entries, &a);
            if da == f64::NEG_INFINITY {
                continue;
            }
            let rest = k.checked_sub(&a).expect("divisor");
            let r = any.get(&rest).map_or(f64::NEG_INFINITY, |b| b.ln);
            let v = da + r;
            if v > m.ln {
                m = Best {
                    ln: v,
                    split: Some(a),
                };
            }
        }
        let class = spec.classify(k);
        if class != IndexClass::K2 {
            let divisor = epsilon_from_power(spec, k, p)?;
            if divisor.ln_epsilon == f64::NEG_INFINITY || spec.coincide(p, spec.log(divisor.i_k - 1)) {
                return Err(Error::ZeroDivisor {
                    index: k.clone(),
                    coord: divisor.i_k,
                });
            }
            let (ln, parts) = match class {
                IndexClass::K1(_) => (-divisor.ln_epsilon, Vec::new()),
                _ => (-divisor.ln_epsilon + m.ln, unroll(k, &any, &m)),
            };
            let mut factors = vec![k.clone()];
            let mut tail: Vec<MultiIndex> = Vec::new();
            for part in &parts {
                if let Some(e) = entries.get(part) {
                    tail.extend(e.factors.iter().cloned());
                }
            }
            tail.sort_by(|a, b| b.degree().cmp(&a.degree()).then(b.cmp(a)));
            factors.extend(tail);
            entries.insert(
                k.clone(),
                DeltaEntry {
                    k: k.clone(),
                    class,
                    divisor,
                    ln_delta: ln,
                    parts,
                    factors,
                },
            );
        }
        let own = ln_delta(&entries, k);
        let best_any = if own >= m.ln && own > f64::NEG_INFINITY {
            Best { ln: own, split: None }
        } else {
            m
        };
        any.insert(k.clone(), best_any);
        Ok(())
    })?;
    Ok(DeltaTable {
        n,
        split: spec.s(),
        max_degree,
        entries,
    })
}

/// Parts of the best multi-part decomposition of `k`, largest first.
fn unroll(k: &MultiIndex, any: &HashMap<MultiIndex, Best>, top: &Best) -> Vec<MultiIndex> {
    let mut parts = Vec::new();
    let mut cur = k.clone();
    let mut node = top.clone();
    loop {
        match node.split.clone() {
            Some(a) => {
                parts.push(a.clone());
                cur = cur.checked_sub(&a).expect("divisor");
                node = any[&cur].clone();
            }
            None => {
                parts.push(cur.clone());
                break;
            }
        }
    }
    parts.sort_by(|a, b| b.degree().cmp(&a.degree()).then(b.cmp(a)));
    parts
}

/// `ln(θ ω̃(m))`, the small-divisor threshold for `N^j_m`.
fn ln_threshold(theta: &Theta, omega: &OmegaTable, m: u32) -> Result<f64> {
    Ok(theta.ln_value + omega.ln_at(Which::Reduced, m)?)
}

fn is_small(d: &DivisorDatum, cut: f64) -> bool {
    d.ln_epsilon < cut
}

/// `N^j_m(k)` for one index; `j` is 1-based.
pub fn count_for(table: &DeltaTable, k: &MultiIndex, m: u32, j: usize, theta: &Theta, omega: &OmegaTable) -> Result<u32> {
    let e = table.get(k).ok_or_else(|| {
        if k.degree() >= 2 && k.head_weight(table.split) == 0 {
            Error::InK2(k.clone())
        } else {
            Error::Invalid(format!("{k} is not in the δ table"))
        }
    })?;
    let cut = ln_threshold(theta, omega, m)?;
    Ok(count_entry(table, e, cut, j))
}

fn count_entry(table: &DeltaTable, e: &DeltaEntry, cut: f64, j: usize) -> u32 {
    e.factors
        .iter()
        .filter(|l| {
            let d = table.datum(l).expect("factor is tabulated");
            d.i_k == j && is_small(d, cut)
        })
        .count() as u32
}

/// `N^j_m(k)` for every tabulated `k`.
pub fn count_small_divisors(
    table: &DeltaTable,
    m: u32,
    j: usize,
    theta: &Theta,
    omega: &OmegaTable,
) -> Result<Vec<(MultiIndex, u32)>> {
    if m < 2 || j == 0 || j > table.n {
        return Err(Error::Invalid(format!("need m ≥ 2 and 1 ≤ j ≤ {}, got m = {m}, j = {j}", table.n)));
    }
    let cut = ln_threshold(theta, omega, m)?;
    Ok(table
        .entries
        .values()
        .map(|e| (e.k.clone(), count_entry(table, e, cut, j)))
        .collect())
}

/// The bound `0` for `|k| ≤ m`, else `2|k|/m − 1`.
pub fn counting_bound(k: &MultiIndex, m: u32) -> f64 {
    if k.degree() <= m {
        0.0
    } else {
        2.0 * k.degree() as f64 / m as f64 - 1.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountViolation {
    pub k: MultiIndex,
    pub m: u32,
    pub j: usize,
    pub count: u32,
    pub bound: f64,
}

/// A consecutive same-index small-divisor pair `l > l'` with `|l| − |l'| < m`.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationViolation {
    pub k: MultiIndex,
    pub m: u32,
    pub j: usize,
    pub larger: MultiIndex,
    pub smaller: MultiIndex,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub m_range: (u32, u32),
    pub theta: f64,
    pub checked: usize,
    pub holds: bool,
    pub first_violation: Option<CountViolation>,
    pub violations: usize,
    /// `Σ_j N^j_m(k) ≤ 2|k| − 1` everywhere and the list length too.
    pub totals_hold: bool,
    pub separation_pairs: usize,
    pub separation_holds: bool,
    pub first_separation_violation: Option<SeparationViolation>,
}

/// Check `N^j_m(k) ≤ bound` for every entry, `m ∈ [m_lo, m_hi]` and `j`,
/// plus the separation property on factor lists.
pub fn check_counting_bound(
    table: &DeltaTable,
    m_lo: u32,
    m_hi: u32,
    theta: &Theta,
    omega: &OmegaTable,
) -> Result<CountingReport> {
    if m_lo < 2 || m_hi < m_lo {
        return Err(Error::Invalid(format!("bad m range [{m_lo}, {m_hi}]")));
    }
    let mut rep = CountingReport {
        m_range: (m_lo, m_hi),
        theta: theta.value,
        checked: 0,
        holds: true,
        first_violation: None,
        violations: 0,
        totals_hold: true,
        separation_pairs: 0,
        separation_holds: true,
        first_separation_violation: None,
    };
    for m in m_lo..=m_hi {
        let cut = ln_threshold(theta, omega, m)?;
        for e in table.entries.values() {
            let cap = 2 * e.k.degree() - 1;
            if e.factors.len() as u32 > cap {
                rep.totals_hold = false;
            }
            let mut total = 0;
            for j in 1..=table.n {
                let c = count_entry(table, e, cut, j);
                total += c;
                rep.checked += 1;
                let bound = counting_bound(&e.k, m);
                if c as f64 > bound + 1e-12 {
                    rep.holds = false;
                    rep.violations += 1;
                    if rep.first_violation.is_none() {
                        rep.first_violation = Some(CountViolation {
                            k: e.k.clone(),
                            m,
                            j,
                            count: c,
                            bound,
                        });
                    }
                }
                separation_scan(table, e, cut, m, j, &mut rep);
            }
            if total > cap {
                rep.totals_hold = false;
            }
        }
    }
    Ok(rep)
}

fn separation_scan(table: &DeltaTable, e: &DeltaEntry, cut: f64, m: u32, j: usize, rep: &mut CountingReport) {
    let small: Vec<&MultiIndex> = e
        .factors
        .iter()
        .filter(|l| {
            let d = table.datum(l).expect("factor is tabulated");
            d.i_k == j && is_small(d, cut)
        })
        .collect();
    for w in small.windows(2) {
        let (a, b) = (w[0], w[1]);
        let Some(diff) = a.checked_sub(b) else { continue };
        if diff.is_zero() || (diff.degree() >= 1 && diff.head_weight(table.split) == 0) {
            continue;
        }
        rep.separation_pairs += 1;
        if a.degree() - b.degree() < m {
            rep.separation_holds = false;
            if rep.first_separation_violation.is_none() {
                rep.first_separation_violation = Some(SeparationViolation {
                    k: e.k.clone(),
                    m,
                    j,
                    larger: a.clone(),
                    smaller: b.clone(),
                });
            }
        }
    }
}

/// `(1/|k|) ln‖ψ_k‖` summarized.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthProfile {
    pub sup: f64,
    pub argmax: MultiIndex,
    /// `(d, max_{|k|=d} (1/d) ln‖ψ_k‖)` for degrees with a nonzero coefficient.
    pub per_degree: Vec<(u32, f64)>,
}

pub fn growth_diagnostic<S: Scalar>(result: &LinearizationResult<S>) -> Result<GrowthProfile> {
    if result.is_obstructed() {
        return Err(Error::Invalid("growth diagnostic needs an unobstructed solution".into()));
    }
    growth_of(&result.psi)
}

pub fn growth_of<S: Scalar>(psi: &SeriesVector<S>) -> Result<GrowthProfile> {
    let mut per: BTreeMap<u32, f64> = BTreeMap::new();
    let mut best: Option<(f64, MultiIndex)> = None;
    for k in psi.support() {
        if k.degree() < 2 {
            continue;
        }
        let norm = coeff_norm(&psi.coefficient(&k));
        if norm == 0.0 {
            continue;
        }
        let v = norm.ln() / k.degree() as f64;
        let slot = per.entry(k.degree()).or_insert(f64::NEG_INFINITY);
        *slot = slot.max(v);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, k));
        }
    }
    let (sup, argmax) = best.ok_or_else(|| Error::Invalid("no nonlinear coefficients".into()))?;
    Ok(GrowthProfile {
        sup,
        argmax,
        per_degree: per.into_iter().collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationRow {
    pub k: MultiIndex,
    pub norm: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub checked: usize,
    pub holds: bool,
    pub violations: Vec<DominationRow>,
    /// `max ‖ψ_k‖ / (α_{|k|}δ_k)` over indices with a finite bound.
    pub max_ratio: f64,
}

/// `‖ψ_k‖ ≤ α_{|k|}δ_k (1 + slack)` for `2 ≤ |k| ≤ N`; `K₂` indices need `ψ_k = 0`.
pub fn check_domination<S: Scalar>(psi: &SeriesVector<S>, table: &DeltaTable, alpha: &AlphaSequence) -> Result<DominationReport> {
    let big_n = psi.max_degree().min(table.max_degree);
    if alpha.len() < big_n as usize {
        return Err(Error::Invalid(format!("α is tabulated to {}, need {big_n}", alpha.len())));
    }
    let mut rep = DominationReport {
        checked: 0,
        holds: true,
        violations: Vec::new(),
        max_ratio: 0.0,
    };
    for k in MultiIndex::in_degree_range(psi.dim(), 2, big_n) {
        let norm = coeff_norm(&psi.coefficient(&k));
        let ln_bound = alpha.ln(k.degree() as usize) + table.ln_delta(&k);
        rep.checked += 1;
        let ok = if ln_bound == f64::NEG_INFINITY {
            norm == 0.0
        } else {
            norm == 0.0 || norm.ln() <= ln_bound + DOMINATION_SLACK.ln_1p()
        };
        if ln_bound > f64::NEG_INFINITY && norm > 0.0 {
            rep.max_ratio = rep.max_ratio.max((norm.ln() - ln_bound).exp());
        }
        if !ok {
            rep.holds = false;
            rep.violations.push(DominationRow {
                k,
                norm,
                bound: ln_bound.exp(),
            });
        }
    }
    Ok(rep)
}

/// The finite-horizon right side `2n Σ_{ν=0}^{H} q_ν^{-1} ln(θ^{-1} ω̃(q_{ν+1})^{-1})`
/// against `max (1/|k|) ln δ_k`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthBound {
    pub horizon: usize,
    pub sequence: Vec<u64>,
    pub terms: Vec<f64>,
    pub bound: f64,
    pub lhs_max: f64,
    pub argmax: Option<MultiIndex>,
    pub holds: bool,
}

/// `H` is the least index with `q_{H+1} ≥ N`.
pub fn brjuno_growth_bound(table: &DeltaTable, omega: &OmegaTable, sequence: &Sequence, theta: &Theta) -> Result<GrowthBound> {
    let big_n = table.max_degree as u64;
    let mut len = 2;
    let q = loop {
        let q = sequence.take(len)?;
        if q[len - 1] >= big_n {
            break q;
        }
        len += 1;
    };
    let horizon = len - 2;
    let mut terms = Vec::with_capacity(horizon + 1);
    for nu in 0..=horizon {
        if q[nu + 1] > omega.m_max as u64 {
            return Err(Error::OutOfRange {
                needed: q[nu + 1],
                available: omega.m_max as u64,
            });
        }
        let ln_w = omega.ln_at(Which::Reduced, q[nu + 1] as u32)?;
        terms.push((-theta.ln_value - ln_w) / q[nu] as f64);
    }
    let bound = 2.0 * table.n as f64 * terms.iter().sum::<f64>();
    let mut lhs_max = f64::NEG_INFINITY;
    let mut argmax = None;
    for e in table.entries.values() {
        let v = e.ln_delta / e.k.degree() as f64;
        if v > lhs_max {
            lhs_max = v;
            argmax = Some(e.k.clone());
        }
    }
    Ok(GrowthBound {
        horizon,
        sequence: q,
        terms,
        bound,
        lhs_max,
        argmax,
        holds: lhs_max <= bound * (1.0 + 1e-12) + 1e-12,
    })
}
