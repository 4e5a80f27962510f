//! The JSON germ description format.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linearizer::Germ;
use crate::polar::{ComplexValue, ExactPolar};
use crate::scalar::{Mode, Scalar};
use crate::series::{SeriesVector, TruncatedSeries};
use crate::spectrum::{Spectrum, DEFAULT_TOLERANCE};

/// An integer that may be too large for a JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNum {
    Int(i64),
    Text(String),
}

impl BigNum {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            BigNum::Int(i) => Ok(BigInt::from(*i)),
            BigNum::Text(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Document(format!("not an integer: {s:?}"))),
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(i) => BigNum::Int(i),
            None => BigNum::Text(x.to_string()),
        }
    }
}

/// A real number: JSON integer, JSON float, or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RealNum {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RealNum {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            RealNum::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
            RealNum::Float(x) => {
                BigRational::from_float(*x).ok_or_else(|| Error::Document(format!("not a finite number: {x}")))
            }
            RealNum::Text(s) => parse_rational(s),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            RealNum::Int(i) => Ok(*i as f64),
            RealNum::Float(x) => Ok(*x),
            RealNum::Text(s) => parse_rational(s)?
                .to_f64()
                .ok_or_else(|| Error::Document(format!("{s:?} does not fit a double"))),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        if q.is_integer() {
            if let Some(i) = q.numer().to_i64() {
                return RealNum::Int(i);
            }
        }
        RealNum::Text(q.to_string())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let q = BigRational::from_str(s).map_err(|_| Error::Document(format!("not a rational: {s:?}")))?;
    Ok(q)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenvalueDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_num: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_den: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_num: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_den: Option<BigNum>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CyclotomicDoc {
    pub order: u32,
    pub coeffs: Vec<RealNum>,
}

/// One monomial `c·z^index` in component `coord` (1-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coord: usize,
    pub index: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub re: Option<RealNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<RealNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_num: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_den: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_num: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle_den: Option<BigNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclotomic: Option<CyclotomicDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermDocument {
    pub dimension: usize,
    pub split: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub truncation: u32,
    pub eigenvalues: Vec<EigenvalueDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilon_entries: Vec<u8>,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
}

/// A germ in whichever mode the document asked for.
#[derive(Clone, Debug)]
pub enum AnyGerm {
    Exact(Germ<Cyclotomic>),
    Float(Germ<Complex64>),
}

impl AnyGerm {
    pub fn spectrum(&self) -> &Spectrum {
        match self {
            AnyGerm::Exact(g) => g.spectrum(),
            AnyGerm::Float(g) => g.spectrum(),
        }
    }
}

/// Scalars that can be written to and read from a term.
pub trait DocScalar: Scalar {
    fn encode(&self, coord: usize, index: Vec<u32>) -> TermDoc;
    fn decode(term: &TermDoc) -> Result<Self>;
}

fn blank_term(coord: usize, index: Vec<u32>) -> TermDoc {
    TermDoc {
        coord,
        index,
        re: None,
        im: None,
        modulus_num: None,
        modulus_den: None,
        angle_num: None,
        angle_den: None,
        cyclotomic: None,
    }
}

fn polar_fields(
    what: &str,
    mn: &Option<BigNum>,
    md: &Option<BigNum>,
    an: &Option<BigNum>,
    ad: &Option<BigNum>,
) -> Result<Option<ExactPolar>> {
    match (mn, md, an, ad) {
        (None, None, None, None) => Ok(None),
        (Some(mn), Some(md), Some(an), Some(ad)) => {
            let (mn, md, an, ad) = (mn.to_bigint()?, md.to_bigint()?, an.to_bigint()?, ad.to_bigint()?);
            if md.is_zero() || ad.is_zero() {
                return Err(Error::Document(format!("{what}: zero denominator")));
            }
            let p = ExactPolar::new(BigRational::new(mn, md), BigRational::new(an, ad))
                .map_err(|e| Error::Document(format!("{what}: {e}")))?;
            Ok(Some(p))
        }
        _ => Err(Error::Document(format!(
            "{what}: polar form needs modulus_num, modulus_den, angle_num and angle_den"
        ))),
    }
}

fn term_forms(t: &TermDoc) -> usize {
    let rect = t.re.is_some() || t.im.is_some();
    let polar = t.modulus_num.is_some() || t.modulus_den.is_some() || t.angle_num.is_some() || t.angle_den.is_some();
    rect as usize + polar as usize + t.cyclotomic.is_some() as usize
}

fn where_(t: &TermDoc) -> String {
    format!("term coord {} index {:?}", t.coord, t.index)
}

impl DocScalar for Complex64 {
    fn encode(&self, coord: usize, index: Vec<u32>) -> TermDoc {
        TermDoc {
            re: Some(RealNum::Float(self.re)),
            im: Some(RealNum::Float(self.im)),
            ..blank_term(coord, index)
        }
    }

    fn decode(t: &TermDoc) -> Result<Self> {
        if let Some(p) = polar_fields(&where_(t), &t.modulus_num, &t.modulus_den, &t.angle_num, &t.angle_den)? {
            return Ok(p.to_c64());
        }
        if let Some(c) = &t.cyclotomic {
            return Ok(decode_cyclotomic(c)?.to_c64());
        }
        let re = t.re.as_ref().map(RealNum::to_f64).transpose()?.unwrap_or(0.0);
        let im = t.im.as_ref().map(RealNum::to_f64).transpose()?.unwrap_or(0.0);
        Ok(Complex64::new(re, im))
    }
}

fn decode_cyclotomic(c: &CyclotomicDoc) -> Result<Cyclotomic> {
    let coeffs = c.coeffs.iter().map(RealNum::to_rational).collect::<Result<Vec<_>>>()?;
    Cyclotomic::from_coefficients(c.order, coeffs)
}

impl DocScalar for Cyclotomic {
    fn encode(&self, coord: usize, index: Vec<u32>) -> TermDoc {
        match self.as_gaussian() {
            Some((re, im)) => TermDoc {
                re: Some(RealNum::from_rational(&re)),
                im: Some(RealNum::from_rational(&im)),
                ..blank_term(coord, index)
            },
            None => TermDoc {
                cyclotomic: Some(CyclotomicDoc {
                    order: self.order(),
                    coeffs: self.coefficients().iter().map(RealNum::from_rational).collect(),
                }),
                ..blank_term(coord, index)
            },
        }
    }

    fn decode(t: &TermDoc) -> Result<Self> {
        if let Some(p) = polar_fields(&where_(t), &t.modulus_num, &t.modulus_den, &t.angle_num, &t.angle_den)? {
            return Cyclotomic::from_polar(p.modulus(), p.angle());
        }
        if let Some(c) = &t.cyclotomic {
            return decode_cyclotomic(c);
        }
        let re = t.re.as_ref().map(RealNum::to_rational).transpose()?.unwrap_or_else(BigRational::zero);
        let im = t.im.as_ref().map(RealNum::to_rational).transpose()?.unwrap_or_else(BigRational::zero);
        Ok(Cyclotomic::from_gaussian(re, im))
    }
}

impl GermDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: GermDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Shape checks that do not need arithmetic.
    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        let bad = |m: String| Err(Error::Document(m));
        if n == 0 {
            return bad("dimension must be at least 1".into());
        }
        if self.split == 0 || self.split > n {
            return bad(format!("split s = {} must satisfy 1 ≤ s ≤ n = {n}", self.split));
        }
        if self.eigenvalues.len() != n {
            return bad(format!("expected {n} eigenvalues, got {}", self.eigenvalues.len()));
        }
        if self.truncation < 1 {
            return bad("truncation must be at least 1".into());
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("tolerance must be positive, got {t}"));
            }
        }
        if !self.epsilon_entries.is_empty() && self.epsilon_entries.len() != n - 1 {
            return bad(format!("epsilon_entries must have length {}", n - 1));
        }
        if self.epsilon_entries.iter().any(|&e| e > 1) {
            return bad("epsilon_entries must be 0 or 1".into());
        }
        let mut seen = BTreeMap::new();
        for t in &self.terms {
            if t.coord == 0 || t.coord > n {
                return bad(format!("{}: coord must be in 1..={n}", where_(t)));
            }
            if t.index.len() != n {
                return bad(format!("{}: index must have length {n}", where_(t)));
            }
            let d: u32 = t.index.iter().sum();
            if d < 2 {
                return bad(format!("{}: |index| must be at least 2", where_(t)));
            }
            if term_forms(t) > 1 {
                return bad(format!("{}: give one of re/im, polar fields or cyclotomic", where_(t)));
            }
            if seen.insert((t.coord, t.index.clone()), ()).is_some() {
                return bad(format!("{}: duplicate term", where_(t)));
            }
        }
        Ok(())
    }

    pub fn tolerance_or_default(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// The spectrum alone. Exact angles with any denominator are accepted here.
    pub fn spectrum(&self) -> Result<Spectrum> {
        self.validate()?;
        let mut values = Vec::with_capacity(self.dimension);
        for (i, e) in self.eigenvalues.iter().enumerate() {
            let what = format!("eigenvalue {}", i + 1);
            let polar = polar_fields(&what, &e.modulus_num, &e.modulus_den, &e.angle_num, &e.angle_den)?;
            let rect = e.re.is_some() || e.im.is_some();
            let v = match (self.mode, polar, rect) {
                (_, Some(_), true) => return Err(Error::Document(format!("{what}: give either re/im or polar fields"))),
                (Mode::Exact, Some(p), false) => ComplexValue::Polar(p),
                (Mode::Exact, None, _) => {
                    return Err(Error::Document(format!("{what}: exact mode needs the polar form")));
                }
                (Mode::Float, Some(p), false) => ComplexValue::Float(p.to_c64()),
                (Mode::Float, None, true) => ComplexValue::Float(Complex64::new(e.re.unwrap_or(0.0), e.im.unwrap_or(0.0))),
                (Mode::Float, None, false) => return Err(Error::Document(format!("{what}: missing value"))),
            };
            values.push(v);
        }
        Spectrum::new(values, self.split)
            .and_then(|s| s.with_tolerance(self.tolerance_or_default()))
            .map_err(|e| Error::Document(e.to_string()))
    }

    /// The germ at the document's truncation degree.
    pub fn to_germ(&self) -> Result<AnyGerm> {
        let spec = self.spectrum()?;
        match self.mode {
            Mode::Exact => Ok(AnyGerm::Exact(self.build(spec)?)),
            Mode::Float => Ok(AnyGerm::Float(self.build(spec)?)),
        }
    }

    fn build<S: DocScalar>(&self, spec: Spectrum) -> Result<Germ<S>> {
        let (n, big_n) = (self.dimension, self.truncation);
        let mut comps: Vec<TruncatedSeries<S>> = (0..n).map(|_| TruncatedSeries::zero(n, big_n)).collect();
        for t in &self.terms {
            let k = MultiIndex::new(t.index.clone());
            if k.degree() > big_n {
                continue;
            }
            let c = S::decode(t)?;
            comps[t.coord - 1].set(k, c);
        }
        Germ::new(spec, SeriesVector::new(comps)?, self.epsilon_entries.clone())
    }

    /// Write a germ back out; terms in coordinate then graded-lex order.
    pub fn from_germ<S: DocScalar>(g: &Germ<S>) -> Self {
        let spec = g.spectrum();
        let eigenvalues = spec
            .values()
            .iter()
            .map(|v| match v {
                ComplexValue::Float(z) => EigenvalueDoc {
                    re: Some(z.re),
                    im: Some(z.im),
                    ..Default::default()
                },
                ComplexValue::Polar(p) => EigenvalueDoc {
                    modulus_num: Some(BigNum::from_bigint(p.modulus().numer())),
                    modulus_den: Some(BigNum::from_bigint(p.modulus().denom())),
                    angle_num: Some(BigNum::from_bigint(p.angle().numer())),
                    angle_den: Some(BigNum::from_bigint(p.angle().denom())),
                    ..Default::default()
                },
            })
            .collect();
        let mut terms = Vec::new();
        for (j, c) in g.tail().components().iter().enumerate() {
            for (k, v) in c.terms() {
                terms.push(v.encode(j + 1, k.exponents().to_vec()));
            }
        }
        GermDocument {
            dimension: spec.n(),
            split: spec.s(),
            mode: spec.mode(),
            tolerance: (spec.tolerance() != DEFAULT_TOLERANCE).then_some(spec.tolerance()),
            truncation: g.max_degree(),
            eigenvalues,
            epsilon_entries: g.epsilon().to_vec(),
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KOENIGS: &str = r#"{
        "dimension": 1, "split": 1, "mode": "exact", "truncation": 10,
        "eigenvalues": [{"modulus_num": 1, "modulus_den": 2, "angle_num": 0, "angle_den": 1}],
        "terms": [{"coord": 1, "index": [2], "re": 1, "im": 0}]
    }"#;

    #[test]
    fn parses_koenigs() {
        let doc = GermDocument::parse(KOENIGS).unwrap();
        let AnyGerm::Exact(g) = doc.to_germ().unwrap() else { panic!() };
        assert_eq!(g.max_degree(), 10);
        assert_eq!(g.tail().component(0).get(&MultiIndex::new(vec![2])), Cyclotomic::one());
    }

    #[test]
    fn rejects_bad_shapes() {
        let bad = KOENIGS.replace("\"split\": 1", "\"split\": 2");
        assert!(matches!(GermDocument::parse(&bad), Err(Error::Document(_))));
        let bad = KOENIGS.replace("[2]", "[1]");
        assert!(GermDocument::parse(&bad).is_err());
        let bad = KOENIGS.replace("\"coord\": 1", "\"coord\": 3");
        assert!(GermDocument::parse(&bad).is_err());
        let bad = KOENIGS.replace("\"truncation\"", "\"bogus\": 1, \"truncation\"");
        assert!(GermDocument::parse(&bad).is_err());
        let zero = KOENIGS.replace("\"modulus_num\": 1", "\"modulus_num\": 0");
        assert!(GermDocument::parse(&zero).unwrap().spectrum().is_err());
    }

    #[test]
    fn huge_angle_denominators_reach_the_spectrum() {
        let den = (BigInt::from(1) << 4096u32).to_string();
        let text = format!(
            r#"{{"dimension": 1, "split": 1, "mode": "exact", "truncation": 4,
            "eigenvalues": [{{"modulus_num": 1, "modulus_den": 1, "angle_num": 1, "angle_den": "{den}"}}]}}"#
        );
        let doc = GermDocument::parse(&text).unwrap();
        assert!(doc.spectrum().is_ok());
        assert!(doc.to_germ().is_err());
    }

    #[test]
    fn exact_round_trip_with_cyclotomic_terms() {
        let text = r#"{
            "dimension": 2, "split": 1, "mode": "exact", "truncation": 4,
            "eigenvalues": [
                {"modulus_num": 1, "modulus_den": 2, "angle_num": 1, "angle_den": 5},
                {"modulus_num": 1, "modulus_den": 1, "angle_num": 0, "angle_den": 1}],
            "terms": [
                {"coord": 1, "index": [1, 1], "modulus_num": 1, "modulus_den": 2, "angle_num": 1, "angle_den": 5},
                {"coord": 1, "index": [2, 0], "re": "3/7", "im": -2}]
        }"#;
        let doc = GermDocument::parse(text).unwrap();
        let AnyGerm::Exact(g) = doc.to_germ().unwrap() else { panic!() };
        let again = GermDocument::from_germ(&g);
        let AnyGerm::Exact(h) = GermDocument::parse(&again.to_json()).unwrap().to_germ().unwrap() else { panic!() };
        assert_eq!(g.tail(), h.tail());
        assert_eq!(g.spectrum().values(), h.spectrum().values());
    }

    #[test]
    fn float_round_trip_is_bit_exact() {
        let text = r#"{
            "dimension": 1, "split": 1, "mode": "float", "tolerance": 1e-10, "truncation": 3,
            "eigenvalues": [{"re": -0.7373688780783197, "im": 0.6754902942615238}],
            "terms": [{"coord": 1, "index": [3], "re": 0.1, "im": 2.220446049250313e-16}]
        }"#;
        let AnyGerm::Float(g) = GermDocument::parse(text).unwrap().to_germ().unwrap() else { panic!() };
        let json = GermDocument::from_germ(&g).to_json();
        let AnyGerm::Float(h) = GermDocument::parse(&json).unwrap().to_germ().unwrap() else { panic!() };
        assert_eq!(g.tail(), h.tail());
        assert_eq!(g.spectrum().values(), h.spectrum().values());
        assert_eq!(h.spectrum().tolerance(), 1e-10);
    }
}
