//! On-disk formats: the JSON couple document, CSV curve exports with
//! metadata comments, and the whitespace matrix export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use couplekit::couple::{Couple, Exponent};
use couplekit::curve::ConcaveCurve;
use couplekit::structure::LinearMap;
use serde::{Deserialize, Serialize};

/// An exponent in a document: a number or the string `"inf"`. IEEE infinity
/// never appears in the files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentField {
    Number(f64),
    Text(String),
}

impl ExponentField {
    pub fn to_exponent(&self) -> Result<Exponent, String> {
        match self {
            ExponentField::Number(p) => {
                if !p.is_finite() {
                    return Err("exponents must be numbers or the string \"inf\"".into());
                }
                Exponent::new(*p).map_err(|e| e.to_string())
            }
            ExponentField::Text(s) if s == "inf" => Ok(Exponent::Infinity),
            ExponentField::Text(s) => Err(format!("unknown exponent literal {s:?}")),
        }
    }
}

/// The couple document: weights, exponents, and optional named elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupleFile {
    pub n: usize,
    pub w0: Vec<f64>,
    pub w1: Vec<f64>,
    pub p0: ExponentField,
    pub p1: ExponentField,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, Vec<f64>>,
}

impl CoupleFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("couple documents serialize")
    }

    pub fn to_couple(&self) -> Result<Couple, String> {
        let couple = Couple::new(
            self.n,
            self.w0.clone(),
            self.w1.clone(),
            self.p0.to_exponent()?,
            self.p1.to_exponent()?,
        )
        .map_err(|e| e.to_string())?;
        for (name, v) in &self.elements {
            couple
                .check_element(v)
                .map_err(|e| format!("element {name:?}: {e}"))?;
        }
        Ok(couple)
    }

    pub fn element(&self, name: &str) -> Result<&[f64], String> {
        self.elements
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| format!("element {name:?} not found in the couple document"))
    }

    /// FNV-1a over the canonical serialization; stable across runs.
    pub fn hash(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.emit().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

pub struct CurveMeta<'a> {
    pub couple_hash: &'a str,
    pub element: &'a str,
    pub functional: &'a str,
    pub p: String,
    pub exact: bool,
}

/// CSV rows `(t, value)` with `#` metadata comment lines and a `t,value`
/// header. Breakpoint representation for exact curves, sampled otherwise.
pub fn curve_csv(meta: &CurveMeta, rows: &[(f64, f64)], curve: Option<&ConcaveCurve>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# couplekit curve export");
    let _ = writeln!(out, "# couple-hash: {}", meta.couple_hash);
    let _ = writeln!(out, "# element: {}", meta.element);
    let _ = writeln!(out, "# functional: {}", meta.functional);
    let _ = writeln!(out, "# p: {}", meta.p);
    let _ = writeln!(out, "# exact: {}", meta.exact);
    if let Some(c) = curve {
        let _ = writeln!(out, "# initial-slope: {}", c.initial_slope());
        let _ = writeln!(out, "# terminal-slope: {}", c.terminal_slope());
    }
    let _ = writeln!(out, "t,value");
    for &(t, v) in rows {
        let _ = writeln!(out, "{t},{v}");
    }
    out
}

/// Dense whitespace matrix document with certificate comments.
pub fn matrix_export(map: &LinearMap, comments: &[(String, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# couplekit operator export");
    let _ = writeln!(out, "# rows: {}", map.rows());
    let _ = writeln!(out, "# cols: {}", map.cols());
    for (k, v) in comments {
        let _ = writeln!(out, "# {k}: {v}");
    }
    for i in 0..map.rows() {
        let row: Vec<String> = (0..map.cols())
            .map(|j| format!("{}", map.entry(i, j)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
