//! Report values and their two renderings.

use jcreduce::io::{coefficient_to_json, polynomial_to_json, series_to_json, SystemFile};
use jcreduce::jacobian::{MembershipVerdict, Witness};
use jcreduce::{Coefficient, GradedSeriesVector, PolySystem, Polynomial};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

/// Converts mathematical objects to report values in the chosen format:
/// structured JSON, or display strings for the pretty printer.
#[derive(Clone, Copy)]
pub struct Emitter {
    pub format: Format,
}

impl Emitter {
    pub fn poly(&self, p: &Polynomial) -> Value {
        match self.format {
            Format::Json => serde_json::to_value(polynomial_to_json(p)).expect("serializable"),
            Format::Pretty => Value::String(p.to_string()),
        }
    }

    pub fn polys(&self, ps: &[Polynomial]) -> Value {
        Value::Array(ps.iter().map(|p| self.poly(p)).collect())
    }

    pub fn system(&self, s: &PolySystem) -> Value {
        match self.format {
            Format::Json => serde_json::to_value(SystemFile::from_system(s)).expect("serializable"),
            Format::Pretty => Value::String(s.to_string()),
        }
    }

    pub fn coeff(&self, c: &Coefficient) -> Value {
        match self.format {
            Format::Json => coefficient_to_json(c),
            Format::Pretty => Value::String(c.to_string()),
        }
    }

    pub fn series(&self, g: &GradedSeriesVector) -> Value {
        match self.format {
            Format::Json => series_to_json(g),
            Format::Pretty => Value::Array(
                (0..=g.order())
                    .map(|r| {
                        let comps: Vec<String> = g.grade(r).iter().map(|p| p.to_string()).collect();
                        Value::String(format!("θ^{r}: ({})", comps.join(", ")))
                    })
                    .collect(),
            ),
        }
    }

    pub fn verdict(&self, v: &MembershipVerdict) -> Value {
        let mut m = Map::new();
        m.insert("verdict".into(), json!(v.verdict.name()));
        m.insert("detail".into(), json!(v.detail));
        if let Some(c) = v.constant() {
            m.insert("constant".into(), self.coeff(c));
        }
        match &v.witness {
            Some(Witness::Determinant(d)) => {
                m.insert("determinant".into(), self.poly(d));
                if let Some(t) = v.offending_term() {
                    m.insert("offending_term".into(), self.poly(&t));
                }
            }
            Some(Witness::Inverse(g)) => {
                m.insert("inverse".into(), self.polys(g.components()));
            }
            Some(Witness::Residual(r)) => {
                m.insert("residual".into(), self.polys(r));
            }
            _ => {}
        }
        if let Some(c) = v.degree_cap {
            m.insert("degree_cap".into(), json!(c));
        }
        if let Some(b) = v.degree_bound {
            m.insert("degree_bound".into(), json!(b));
        }
        Value::Object(m)
    }
}

/// A named pass/fail check inside a report.
pub fn check(name: &str, passed: bool) -> Value {
    json!({ "name": name, "passed": passed })
}

/// Indented `key: value` text.
pub fn render_pretty(v: &Value) -> String {
    let mut out = String::new();
    pretty_into(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn pretty_into(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None if is_empty(x) => out.push_str(&format!("{pad}{k}: []\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty_into(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        pretty_into(x, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn is_empty(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.is_empty(),
        Value::Object(m) => m.is_empty(),
        _ => false,
    }
}
