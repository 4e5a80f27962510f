//! Command implementations. Each returns a JSON value, a text rendering and
//! optional CSV rows; `main` decides which of them to emit.

use std::fmt::Write as _;

use germ_core::document::DocScalar;
use germ_core::linearizer::{conjugacy_defect, LinearizationResult, NormalFormResult};
use germ_core::majorant::{
    alpha_sequence, brjuno_growth_bound, check_counting_bound, check_domination, delta_table, delta_table_bytes,
    delta_table_rows, growth_diagnostic, normalize_germ, theta_of, DeltaTable,
};
use germ_core::spectrum::{brjuno_sum, fit_power_law, OmegaEntry, Sequence, Which};
use germ_core::{
    check_osculating_form, enumerate_resonances, omega_tables, poincare_dulac, reduced_omega_table, solve_linearization,
    AnyGerm, Error, Germ, GermDocument, Mode, MultiIndex, Result, Scalar, SeriesVector, Spectrum,
};
use serde_json::{json, Value};

/// Largest number of `(k, j)` pairs an ω table may enumerate.
const OMEGA_BUDGET: u128 = 20_000_000;

pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Option<Csv>,
}

pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    /// Header `k_1,…,k_n,value` followed by `extra`.
    fn indexed(n: usize, extra: &[&str]) -> Csv {
        let mut header: Vec<String> = (1..=n).map(|i| format!("k_{i}")).collect();
        header.push("value".into());
        header.extend(extra.iter().map(|s| s.to_string()));
        Csv { header, rows: Vec::new() }
    }

    fn push(&mut self, k: &MultiIndex, value: impl ToString, extra: Vec<String>) {
        let mut row: Vec<String> = k.exponents().iter().map(u32::to_string).collect();
        row.push(value.to_string());
        row.extend(extra);
        self.rows.push(row);
    }
}

fn show<S: Scalar>(x: &S) -> String {
    match S::MODE {
        Mode::Exact => format!("{x:?}"),
        Mode::Float => {
            let z = x.to_c64();
            format!("{}{:+}i", z.re, z.im)
        }
    }
}

fn series_json<S: DocScalar>(v: &SeriesVector<S>, min_degree: u32) -> Value {
    let mut terms = Vec::new();
    for (j, c) in v.components().iter().enumerate() {
        for (k, x) in c.terms().filter(|(k, _)| k.degree() >= min_degree) {
            terms.push(x.encode(j + 1, k.exponents().to_vec()));
        }
    }
    serde_json::to_value(terms).expect("terms serialize")
}

fn series_text<S: Scalar>(out: &mut String, name: &str, v: &SeriesVector<S>, min_degree: u32) {
    for (j, c) in v.components().iter().enumerate() {
        for (k, x) in c.terms().filter(|(k, _)| k.degree() >= min_degree) {
            let _ = writeln!(out, "  {name}_{} {k}  {}", j + 1, show(x));
        }
    }
}

fn index_rows(v: &SeriesVector<impl Scalar>, csv: &mut Csv) {
    for k in v.support().into_iter().filter(|k| k.degree() >= 2) {
        csv.push(&k, germ_core::coeff_norm(&v.coefficient(&k)), vec![]);
    }
}

fn spectrum_json(spec: &Spectrum) -> Value {
    json!({
        "n": spec.n(),
        "s": spec.s(),
        "mode": spec.mode(),
        "tolerance": spec.tolerance(),
    })
}

pub fn resonances(doc: &GermDocument, degree: Option<u32>) -> Result<Report> {
    let spec = doc.spectrum()?;
    let m = degree.unwrap_or(doc.truncation).max(2);
    let rep = enumerate_resonances(&spec, m)?;
    let mut text = format!("resonances up to |k| = {m}, split s = {}\nverdict: {}\n", spec.s(), rep.verdict.name());
    if let Some(w) = &rep.witness {
        let _ = writeln!(text, "witness: k = {}, coordinate {}", w.index, w.coord);
    }
    let list = |v: &[MultiIndex]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let _ = writeln!(text, "K1~: {}", list(&rep.k1_tilde));
    let _ = writeln!(text, "K2~: {}", list(&rep.k2_tilde));
    let mut csv = Csv::indexed(spec.n(), &[]);
    for (j, ks) in rep.resonant.iter().enumerate() {
        let _ = writeln!(text, "Res_{}: {}", j + 1, list(ks));
        for k in ks {
            csv.push(k, j + 1, vec![]);
        }
    }
    for nr in &rep.near_resonances {
        let _ = writeln!(text, "near: k = {}, coordinate {}, distance {:e}", nr.index, nr.coord, nr.distance);
    }
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["command"] = json!("resonances");
    json["spectrum"] = spectrum_json(&spec);
    Ok(Report { json, text, csv: Some(csv) })
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Linearize,
    NormalForm,
}

pub fn linearize(doc: &GermDocument, degree: Option<u32>, mode: SolveMode, diagnostics: bool) -> Result<Report> {
    match doc.to_germ()? {
        AnyGerm::Exact(g) => linearize_in(&at_degree(&g, degree), mode, diagnostics),
        AnyGerm::Float(g) => linearize_in(&at_degree(&g, degree), mode, diagnostics),
    }
}

fn at_degree<S: Scalar>(g: &Germ<S>, degree: Option<u32>) -> Germ<S> {
    match degree {
        Some(d) => g.with_max_degree(d),
        None => g.clone(),
    }
}

fn linearize_in<S: DocScalar>(g: &Germ<S>, mode: SolveMode, diagnostics: bool) -> Result<Report> {
    let mut report = match mode {
        SolveMode::Linearize => {
            let r = solve_linearization(g)?;
            linearization_report(g, &r)
        }
        SolveMode::NormalForm => normal_form_report(g, &poincare_dulac(g)?),
    };
    if diagnostics {
        let (json, text) = diagnostics_for(g)?;
        report.json["diagnostics"] = json;
        report.text.push_str(&text);
    }
    Ok(report)
}

fn linearization_json<S: DocScalar>(r: &LinearizationResult<S>) -> Value {
    let obstructions: Vec<Value> = r
        .obstructions
        .iter()
        .map(|o| {
            json!({
                "index": o.index,
                "coord": o.coord + 1,
                "coefficient": o.coefficient.encode(o.coord + 1, o.index.exponents().to_vec()),
                "provenance": o.provenance,
            })
        })
        .collect();
    json!({
        "status": if r.is_obstructed() { "obstructed" } else { "linearized" },
        "obstructions": obstructions,
        "psi": series_json(&r.psi, 2),
        "residual": r.residual,
        "relative_residual": r.relative_residual,
        "warnings": r.warnings,
    })
}

fn linearization_report<S: DocScalar>(g: &Germ<S>, r: &LinearizationResult<S>) -> Report {
    let mut json = linearization_json(r);
    json["command"] = json!("linearize");
    json["mode"] = json!("linearize");
    json["spectrum"] = spectrum_json(g.spectrum());
    json["truncation"] = json!(g.max_degree());
    let mut text = format!(
        "linearization to degree {}: {}\n",
        g.max_degree(),
        if r.is_obstructed() { "obstructed" } else { "linearized" }
    );
    for o in &r.obstructions {
        let _ = writeln!(
            text,
            "  obstruction at k = {}, coordinate {}: {} ({})",
            o.index,
            o.coord + 1,
            show(&o.coefficient),
            o.provenance.name()
        );
    }
    series_text(&mut text, "psi", &r.psi, 2);
    let _ = writeln!(text, "residual {:e} (relative {:e})", r.residual, r.relative_residual);
    for w in &r.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let mut csv = Csv::indexed(g.n(), &[]);
    index_rows(&r.psi, &mut csv);
    Report { json, text, csv: Some(csv) }
}

fn normal_form_report<S: DocScalar>(g: &Germ<S>, r: &NormalFormResult<S>) -> Report {
    let json = json!({
        "command": "linearize",
        "mode": "normal-form",
        "spectrum": spectrum_json(g.spectrum()),
        "truncation": g.max_degree(),
        "status": if r.is_linear() { "linear" } else { "resonant-terms" },
        "g": series_json(&r.g, 2),
        "phi": series_json(&r.phi, 2),
        "resonant_support": r.resonant_support,
        "residual": r.residual,
        "relative_residual": r.relative_residual,
        "warnings": r.warnings,
    });
    let mut text = format!(
        "normal form to degree {}: {}\n",
        g.max_degree(),
        if r.is_linear() { "linear" } else { "resonant terms remain" }
    );
    series_text(&mut text, "g", &r.g, 2);
    series_text(&mut text, "phi", &r.phi, 2);
    let _ = writeln!(text, "residual {:e} (relative {:e})", r.residual, r.relative_residual);
    let mut csv = Csv::indexed(g.n(), &[]);
    index_rows(&r.g, &mut csv);
    Report { json, text, csv: Some(csv) }
}

/// Normalize, solve both germs, then growth and domination on the normalized one.
fn diagnostics_for<S: DocScalar>(g: &Germ<S>) -> Result<(Value, String)> {
    let norm = normalize_germ(g)?;
    let raw = solve_linearization(g)?;
    let scaled = solve_linearization(&norm.germ)?;
    let mut text = format!("diagnostics: normalization Q = {}\n", norm.q);
    let mut json = json!({
        "q": norm.q,
        "raw": linearization_json(&raw),
        "normalized": linearization_json(&scaled),
    });
    for (name, r) in [("raw", &raw), ("normalized", &scaled)] {
        match growth_diagnostic(r) {
            Ok(p) => {
                let _ = writeln!(text, "  {name} growth: sup (1/|k|) ln‖ψ_k‖ = {:.6} at {}", p.sup, p.argmax);
                json[name]["growth"] = serde_json::to_value(&p).expect("profile serializes");
            }
            Err(e) => {
                let _ = writeln!(text, "  {name} growth: {e}");
                json[name]["growth"] = json!({ "error": e.to_string() });
            }
        }
    }
    if scaled.is_obstructed() {
        json["domination"] = json!({ "error": "obstructed" });
        text.push_str("  domination: skipped (obstructed)\n");
    } else {
        let big_n = g.max_degree().max(2);
        match delta_table(g.spectrum(), big_n) {
            Ok(table) => {
                let rep = check_domination(&scaled.psi, &table, &alpha_sequence(big_n as usize)?)?;
                let _ = writeln!(
                    text,
                    "  domination ‖ψ_k‖ ≤ α_|k| δ_k: {} ({} indices, max ratio {:.6})",
                    if rep.holds { "holds" } else { "violated" },
                    rep.checked,
                    rep.max_ratio
                );
                json["domination"] = serde_json::to_value(&rep).expect("report serializes");
            }
            Err(e) => {
                let _ = writeln!(text, "  domination: {e}");
                json["domination"] = json!({ "error": e.to_string() });
            }
        }
    }
    // the defect of the normalized solution, for comparison with the raw one
    json["normalized"]["defect"] = serde_json::to_value(conjugacy_defect(&norm.germ, &scaled.psi)?).expect("defect serializes");
    Ok((json, text))
}

pub fn parse_sequence(spec: &str) -> Result<Sequence> {
    match spec {
        "pow2" => Ok(Sequence::PowersOfTwo),
        list => {
            let v = list
                .split(',')
                .map(|t| t.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Invalid(format!("sequence must be pow2 or a comma list of integers, got {list:?}")))?;
            let seq = Sequence::List(v);
            seq.take(1)?;
            Ok(seq)
        }
    }
}

fn binom(a: u128, b: u128) -> u128 {
    (0..b).fold(1u128, |acc, i| acc.saturating_mul(a - i) / (i + 1))
}

fn check_omega_budget(n: usize, m: u32) -> Result<()> {
    let pairs = binom(m as u128 + n as u128, n as u128).saturating_mul(n as u128);
    if pairs > OMEGA_BUDGET {
        return Err(Error::Invalid(format!(
            "an ω table to m = {m} in dimension {n} needs about {pairs} evaluations; lower --horizon or --m-max"
        )));
    }
    Ok(())
}

fn omega_rows(entries: &[OmegaEntry], n: usize, text: &mut String) -> Csv {
    let mut header = vec!["m".to_string(), "value".to_string()];
    header.extend((1..=n).map(|i| format!("witness_k_{i}")));
    header.push("witness_coord".into());
    let mut csv = Csv { header, rows: Vec::new() };
    for e in entries {
        let mut row = vec![e.m.to_string(), e.value.to_string()];
        match &e.witness {
            Some(w) => {
                row.extend(w.index.exponents().iter().map(u32::to_string));
                row.push(w.coord.to_string());
            }
            None => row.extend(std::iter::repeat_n(String::new(), n + 1)),
        }
        csv.rows.push(row);
        let _ = writeln!(
            text,
            "  ω({:>4}) = {:<12.6e} ln ω = {:<12.6} {}",
            e.m,
            e.value,
            e.ln_value,
            e.witness.as_ref().map(|w| format!("k = {}, j = {}", w.index, w.coord)).unwrap_or_default()
        );
    }
    csv
}

pub fn brjuno(
    doc: &GermDocument,
    which: Which,
    sequence: &Sequence,
    horizon: usize,
    m_max: Option<u32>,
    threshold: f64,
) -> Result<Report> {
    let spec = doc.spectrum()?;
    let p = sequence.take(horizon + 2)?;
    let top = match m_max {
        Some(m) => m.max(2),
        None => u32::try_from(p[horizon + 1])
            .map_err(|_| Error::Invalid("sequence too large".into()))?
            .max(2),
    };
    check_omega_budget(spec.n(), top)?;
    let table = match which {
        Which::Partial => omega_tables(&spec, top)?,
        Which::Reduced => reduced_omega_table(&spec, top)?,
    };
    let est = brjuno_sum(&table, which, sequence, horizon, threshold)?;
    let column = table.column(which)?;
    let fit = fit_power_law(column);
    let mut text = format!(
        "{} ω table to m = {top}\n",
        if which == Which::Partial { "partial" } else { "reduced" }
    );
    let csv = omega_rows(column, spec.n(), &mut text);
    let _ = writeln!(text, "Brjuno sum over p = {:?}", est.sequence);
    for (nu, (t, s)) in est.terms.iter().zip(&est.partial_sums).enumerate() {
        let _ = writeln!(text, "  ν = {nu:>2}: term {t:.6}, partial sum {s:.6}");
    }
    let _ = writeln!(
        text,
        "verdict: {} (last {} terms against threshold {}; a heuristic, not a proof)",
        est.verdict.name(),
        est.tail_len,
        est.threshold
    );
    if let Some(f) = &fit {
        let _ = writeln!(text, "power-law fit: ω(m) ≈ e^{:.4} m^-{:.4} over {} points", f.ln_prefactor, f.exponent, f.points);
    }
    let json = json!({
        "command": "brjuno",
        "spectrum": spectrum_json(&spec),
        "which": which,
        "m_max": top,
        "table": column,
        "estimate": est,
        "power_law": fit,
    });
    Ok(Report { json, text, csv: Some(csv) })
}

pub fn majorant(doc: &GermDocument, degree: Option<u32>, sequence: &Sequence) -> Result<Report> {
    let spec = doc.spectrum()?;
    let big_n = degree.unwrap_or(doc.truncation).max(2);
    let (rows, bytes) = (delta_table_rows(spec.n(), big_n), delta_table_bytes(spec.n(), big_n));
    let mut text = format!("δ table for N = {big_n}: {rows} rows, about {bytes} bytes\n");
    let alpha = alpha_sequence(big_n as usize)?;
    let _ = writeln!(
        text,
        "α: {}",
        alpha.values().iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    );
    let theta = theta_of(&spec);
    let _ = writeln!(text, "θ = {:.6e}{}", theta.value, if theta.inversion_advised { " (min |λ| > 1: consider f⁻¹)" } else { "" });
    let table = delta_table(&spec, big_n)?;
    // the growth bound reads ω̃ at the first sequence term ≥ N
    let mut len = 2;
    let reach = loop {
        let q = sequence.take(len)?;
        if q[len - 1] >= big_n as u64 {
            break q[len - 1];
        }
        len += 1;
    };
    let reach = u32::try_from(reach).map_err(|_| Error::Invalid("sequence too large".into()))?;
    check_omega_budget(spec.n(), reach)?;
    let omega = reduced_omega_table(&spec, reach)?;
    let counting = check_counting_bound(&table, 2, big_n, &theta, &omega)?;
    let growth = brjuno_growth_bound(&table, &omega, sequence, &theta)?;
    let csv = delta_text(&table, &mut text);
    let _ = writeln!(
        text,
        "counting bound N^j_m(k) ≤ max(0, 2|k|/m − 1): {} ({} cells); totals ≤ 2|k| − 1: {}; separation: {} ({} pairs)",
        if counting.holds { "pass" } else { "fail" },
        counting.checked,
        if counting.totals_hold { "pass" } else { "fail" },
        if counting.separation_holds { "pass" } else { "fail" },
        counting.separation_pairs
    );
    let _ = writeln!(
        text,
        "growth: max (1/|k|) ln δ_k = {:.6} vs bound {:.6} (horizon {}): {}",
        growth.lhs_max,
        growth.bound,
        growth.horizon,
        if growth.holds { "holds" } else { "fails" }
    );
    let json = json!({
        "command": "majorant",
        "spectrum": spectrum_json(&spec),
        "max_degree": big_n,
        "delta_rows": rows,
        "delta_bytes": bytes,
        "alpha": alpha.values().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "theta": theta,
        "delta": table.entries.values().collect::<Vec<_>>(),
        "counting": counting,
        "growth": growth,
    });
    Ok(Report { json, text, csv: Some(csv) })
}

fn delta_text(table: &DeltaTable, text: &mut String) -> Csv {
    let mut csv = Csv::indexed(table.n, &["ln_value", "i_k", "factors"]);
    for e in table.entries.values() {
        let factors = e.factors.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(text, "  δ{} = {:.6e}  (i_k = {}, factors {factors})", e.k, e.ln_delta.exp(), e.divisor.i_k);
        csv.push(&e.k, e.ln_delta.exp(), vec![e.ln_delta.to_string(), e.divisor.i_k.to_string(), factors]);
    }
    csv
}

pub fn check_form(doc: &GermDocument) -> Result<Report> {
    let (rep, n, s) = match doc.to_germ()? {
        AnyGerm::Exact(g) => (check_osculating_form(&g), g.n(), g.s()),
        AnyGerm::Float(g) => (check_osculating_form(&g), g.n(), g.s()),
    };
    let mut text = format!(
        "invariant x = 0: {}\nosculating: {}\nlinear restriction: {}\n",
        rep.invariant, rep.osculating, rep.restriction_linear
    );
    for (j, o) in rep.ord_x.iter().enumerate() {
        let _ = writeln!(text, "  ord_x(f_{}) = {o}", j + 1);
    }
    if rep.coupling_flag {
        text.push_str("  the Jordan entry ε_s couples x_s to y_1\n");
    }
    let mut json = serde_json::to_value(&rep).expect("report serializes");
    json["command"] = json!("check-form");
    json["n"] = json!(n);
    json["s"] = json!(s);
    Ok(Report { json, text, csv: None })
}
