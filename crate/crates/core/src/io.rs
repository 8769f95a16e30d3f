//! JSON files for polynomials, systems and graded series.
//!
//! A polynomial is `{"nvars": n, "terms": [{"exp": [...], "re": "p/q",
//! "im": "p/q"}]}` with terms in descending graded-lex order. Rationals
//! are always written as `p/q`; bare integers are accepted on input.

use serde::{Deserialize, Serialize};

use crate::coeff::{parse_rational, rational_to_string, Coefficient};
use crate::error::{Error, Result};
use crate::poly::{PolySystem, Polynomial};
use crate::reduction::{self, ReducedSystem};
use crate::series::GradedSeriesVector;

pub const SYSTEM_VERSION: &str = "jcreduce-system/1";

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexEntry {
    pub i: usize,
    pub j: usize,
    pub var: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_map: Option<Vec<IndexEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub version: String,
    pub nvars: usize,
    pub degree: u32,
    pub components: Vec<PolynomialJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

pub fn polynomial_to_json(p: &Polynomial) -> PolynomialJson {
    PolynomialJson {
        nvars: p.nvars(),
        terms: p
            .terms()
            .rev()
            .map(|(m, c)| TermJson {
                exp: m.exps().to_vec(),
                re: rational_to_string(c.re()),
                im: rational_to_string(c.im()),
            })
            .collect(),
    }
}

fn polynomial_from_json(p: &PolynomialJson, nvars: usize, what: &str) -> Result<Polynomial> {
    if p.nvars != nvars {
        return Err(Error::Schema(format!("{what}: nvars is {}, expected {nvars}", p.nvars)));
    }
    let terms = p
        .terms
        .iter()
        .enumerate()
        .map(|(t, term)| {
            let at = format!("{what}, term {}", t + 1);
            if term.exp.len() != nvars {
                return Err(Error::Schema(format!(
                    "{at}: exponent vector has length {}, expected {nvars}",
                    term.exp.len()
                )));
            }
            let re = parse_rational(&term.re).map_err(|e| Error::Schema(format!("{at}, field re: {e}")))?;
            let im = parse_rational(&term.im).map_err(|e| Error::Schema(format!("{at}, field im: {e}")))?;
            Ok((term.exp.clone(), Coefficient::new(re, im)))
        })
        .collect::<Result<Vec<_>>>()?;
    Polynomial::from_terms(nvars, terms)
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let p: PolynomialJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    polynomial_from_json(&p, p.nvars, "polynomial")
}

pub fn emit_polynomial(p: &Polynomial) -> String {
    serde_json::to_string_pretty(&polynomial_to_json(p)).expect("serializable")
}

impl SystemFile {
    pub fn from_system(s: &PolySystem) -> Self {
        SystemFile {
            version: SYSTEM_VERSION.to_string(),
            nvars: s.nvars(),
            degree: s.degree_bound(),
            components: s.components().iter().map(polynomial_to_json).collect(),
            provenance: None,
        }
    }

    pub fn from_reduced(r: &ReducedSystem) -> Self {
        let mut f = Self::from_system(&r.system);
        f.provenance = Some(Provenance {
            source_dim: Some(r.source_dim),
            source_degree: Some(r.source_degree),
            variant: Some(r.variant.name().to_string()),
            index_map: Some(
                reduction::index_map(r.source_dim)
                    .into_iter()
                    .map(|(i, j, var)| IndexEntry { i, j, var })
                    .collect(),
            ),
            ..Default::default()
        });
        f
    }

    pub fn to_system(&self) -> Result<PolySystem> {
        if self.version != SYSTEM_VERSION {
            return Err(Error::Schema(format!(
                "version is '{}', expected '{SYSTEM_VERSION}'",
                self.version
            )));
        }
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| polynomial_from_json(c, self.nvars, &format!("component {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(self.nvars, comps)?
            .with_degree_bound(self.degree)
            .map_err(|e| Error::Schema(format!("degree bound: {e}")))
    }
}

pub fn parse_system_file(text: &str) -> Result<SystemFile> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

pub fn parse_system(text: &str) -> Result<PolySystem> {
    parse_system_file(text)?.to_system()
}

pub fn emit_system_file(f: &SystemFile) -> String {
    let mut s = serde_json::to_string_pretty(f).expect("serializable");
    s.push('\n');
    s
}

pub fn emit_system(s: &PolySystem) -> String {
    emit_system_file(&SystemFile::from_system(s))
}

/// `{"nvars", "order", "grades": [{"grade": r, "components": [...]}]}`.
pub fn series_to_json(g: &GradedSeriesVector) -> serde_json::Value {
    let grades: Vec<serde_json::Value> = (0..=g.order())
        .map(|r| {
            serde_json::json!({
                "grade": r,
                "components": g.grade(r).iter().map(polynomial_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "nvars": g.nvars(),
        "order": g.order(),
        "grades": grades,
    })
}

pub fn coefficient_to_json(c: &Coefficient) -> serde_json::Value {
    serde_json::json!({
        "re": rational_to_string(c.re()),
        "im": rational_to_string(c.im()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize, n: usize) -> Polynomial {
        Polynomial::var(i, n)
    }

    #[test]
    fn polynomial_round_trip_and_order() {
        let p = &(&z(0, 2).pow(2) - &z(1, 2).scale(&Coefficient::ratio(3, 4))) + &Polynomial::constant(Coefficient::i(), 2);
        let text = emit_polynomial(&p);
        assert_eq!(parse_polynomial(&text).unwrap(), p);
        let json = polynomial_to_json(&p);
        assert_eq!(json.terms[0].exp, vec![2, 0]);
        assert_eq!(json.terms[1].re, "-3/4");
        assert_eq!(json.terms[2].im, "1/1");
    }

    #[test]
    fn bare_integers_are_accepted() {
        let p = parse_polynomial(r#"{"nvars": 1, "terms": [{"exp": [1], "re": "2", "im": "0"}]}"#).unwrap();
        assert_eq!(p, z(0, 1).scale(&2.into()));
    }

    #[test]
    fn system_round_trip_is_byte_identical() {
        let s = PolySystem::new(2, vec![&z(0, 2) - &z(1, 2).pow(3), z(1, 2)]).unwrap();
        let text = emit_system(&s);
        let back = parse_system(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(emit_system(&back), text);
    }

    #[test]
    fn schema_errors_name_the_component() {
        let bad = r#"{"version": "jcreduce-system/1", "nvars": 2, "degree": 1,
            "components": [{"nvars": 2, "terms": [{"exp": [1, 0], "re": "1/1", "im": "0/1"}]},
                           {"nvars": 2, "terms": [{"exp": [1], "re": "1/1", "im": "0/1"}]}]}"#;
        let err = parse_system(bad).unwrap_err().to_string();
        assert!(err.contains("component 2"), "{err}");
        assert!(err.contains("exponent vector"), "{err}");
        let bad_rational = bad.replace(r#""exp": [1], "re": "1/1""#, r#""exp": [0, 1], "re": "1/0""#);
        assert!(parse_system(&bad_rational).unwrap_err().to_string().contains("field re"));
        assert!(parse_system("{").is_err());
    }
}
