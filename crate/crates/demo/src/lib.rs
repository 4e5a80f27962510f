//! Browser bindings. Every export takes plain numbers or JSON text and returns JSON text.

use germ_core::spectrum::{brjuno_sum, Sequence, Which, DEFAULT_DIVERGENCE_THRESHOLD};
use germ_core::majorant::growth_diagnostic;
use germ_core::{
    enumerate_resonances, reduced_omega_table, solve_linearization, Germ, MultiIndex, SeriesVector, Spectrum,
    TruncatedSeries,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const MAX_DEGREE: u32 = 24;
const MAX_HORIZON: usize = 12;

fn multiplier(modulus: f64, turns: f64) -> Complex64 {
    Complex64::from_polar(modulus, std::f64::consts::TAU * turns)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `pairs` is a JSON array of `[modulus, turns]`.
pub fn resonance_json(pairs: &str, s: usize, degree: u32) -> Result<String, String> {
    let pairs: Vec<(f64, f64)> = serde_json::from_str(pairs).map_err(err)?;
    if !(2..=MAX_DEGREE).contains(&degree) {
        return Err(format!("degree must be in 2..={MAX_DEGREE}"));
    }
    let spec = Spectrum::float(pairs.iter().map(|&(r, t)| multiplier(r, t)).collect(), s).map_err(err)?;
    let rep = enumerate_resonances(&spec, degree).map_err(err)?;
    Ok(serde_json::to_string(&rep).map_err(err)?)
}

/// ω̃ on powers of two and the Brjuno partial sums for the single multiplier `modulus·e^{2πi·turns}`.
pub fn brjuno_json(modulus: f64, turns: f64, horizon: usize) -> Result<String, String> {
    if horizon == 0 || horizon > MAX_HORIZON {
        return Err(format!("horizon must be in 1..={MAX_HORIZON}"));
    }
    let spec = Spectrum::float(vec![multiplier(modulus, turns)], 1).map_err(err)?;
    let m_max = 1u32 << (horizon + 1);
    let table = reduced_omega_table(&spec, m_max).map_err(err)?;
    let est = brjuno_sum(&table, Which::Reduced, &Sequence::PowersOfTwo, horizon, DEFAULT_DIVERGENCE_THRESHOLD)
        .map_err(err)?;
    let omega: Vec<Value> = table
        .reduced
        .iter()
        .map(|e| json!({ "m": e.m, "ln_value": e.ln_value }))
        .collect();
    Ok(json!({ "omega": omega, "estimate": est }).to_string())
}

/// Linearizes `x ↦ λx + Σ a_d x^d` in floats; `coeffs` is a JSON array of `[re, im]` for `d = 2, 3, …`.
pub fn growth_json(modulus: f64, turns: f64, coeffs: &str, degree: u32) -> Result<String, String> {
    let coeffs: Vec<(f64, f64)> = serde_json::from_str(coeffs).map_err(err)?;
    if !(2..=MAX_DEGREE).contains(&degree) {
        return Err(format!("degree must be in 2..={MAX_DEGREE}"));
    }
    let spec = Spectrum::float(vec![multiplier(modulus, turns)], 1).map_err(err)?;
    let terms = coeffs
        .iter()
        .zip(2u32..=degree)
        .map(|(&(re, im), d)| (MultiIndex::new(vec![d]), Complex64::new(re, im)));
    let tail = TruncatedSeries::from_terms(1, degree, terms).map_err(err)?;
    let f = Germ::new(spec, SeriesVector::new(vec![tail]).map_err(err)?, vec![]).map_err(err)?;
    let r = solve_linearization(&f).map_err(err)?;
    if let Some(o) = r.obstructions.first() {
        return Ok(json!({ "status": "obstructed", "degree": o.index.degree() }).to_string());
    }
    let g = growth_diagnostic(&r).map_err(err)?;
    Ok(json!({ "status": "linearized", "growth": g, "residual": r.residual }).to_string())
}

#[wasm_bindgen]
pub fn resonances(pairs: &str, s: usize, degree: u32) -> Result<String, JsValue> {
    resonance_json(pairs, s, degree).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn brjuno(modulus: f64, turns: f64, horizon: usize) -> Result<String, JsValue> {
    brjuno_json(modulus, turns, horizon).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn growth(modulus: f64, turns: f64, coeffs: &str, degree: u32) -> Result<String, JsValue> {
    growth_json(modulus, turns, coeffs, degree).map_err(|e| JsValue::from_str(&e))
}
