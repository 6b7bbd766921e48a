use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spline::CubicSpline;

/// The free function `α(v)` of the ruled (Case I) family.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaProfile {
    Constant(f64),
    /// `α(v) = v`
    Linear,
    /// `α(v) = cos v`
    Cosine,
    /// `α(v) = 2 sin v`
    TwoSine,
    Tabulated(Arc<CubicSpline>),
}

impl AlphaProfile {
    pub fn tabulated(v: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        Ok(AlphaProfile::Tabulated(Arc::new(CubicSpline::new(v, alpha)?)))
    }

    /// Reads a `v,alpha` CSV table.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(csv_err)?;
        let headers = reader.headers().map_err(csv_err)?.clone();
        if headers.len() != 2 || &headers[0] != "v" || &headers[1] != "alpha" {
            return Err(Error::InvalidProfile(format!(
                "{}: expected header `v,alpha`, found `{}`",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut vs = Vec::new();
        let mut alphas = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(csv_err)?;
            let parse = |k: usize| -> Result<f64> {
                record[k].parse::<f64>().map_err(|e| {
                    Error::InvalidProfile(format!("{}: row {}: `{}`: {e}", path.display(), line + 2, &record[k]))
                })
            };
            vs.push(parse(0)?);
            alphas.push(parse(1)?);
        }
        Self::tabulated(vs, alphas)
    }

    /// Parses `const:<c>`, `linear`, `cos`, `sin2`, or `csv:<path>`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "linear" => Ok(AlphaProfile::Linear),
            "cos" => Ok(AlphaProfile::Cosine),
            "sin2" => Ok(AlphaProfile::TwoSine),
            _ => {
                if let Some(c) = text.strip_prefix("const:") {
                    let c: f64 = c.parse().map_err(|_| Error::InvalidProfile(format!("bad constant `{c}`")))?;
                    if !c.is_finite() {
                        return Err(Error::InvalidProfile(format!("constant must be finite, got {c}")));
                    }
                    Ok(AlphaProfile::Constant(c))
                } else if let Some(path) = text.strip_prefix("csv:") {
                    Self::from_csv_path(Path::new(path))
                } else {
                    Err(Error::InvalidProfile(format!(
                        "unknown profile `{text}` (expected const:<c>|linear|cos|sin2|csv:<path>)"
                    )))
                }
            }
        }
    }

    /// Sampled domain, if the profile has one.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            AlphaProfile::Tabulated(s) => Some(s.domain()),
            _ => None,
        }
    }

    pub fn value(&self, v: f64) -> Result<f64> {
        Ok(match self {
            AlphaProfile::Constant(c) => *c,
            AlphaProfile::Linear => v,
            AlphaProfile::Cosine => v.cos(),
            AlphaProfile::TwoSine => 2.0 * v.sin(),
            AlphaProfile::Tabulated(s) => s.value(v)?,
        })
    }

    /// `α'(v)`.
    pub fn derivative(&self, v: f64) -> Result<f64> {
        Ok(match self {
            AlphaProfile::Constant(_) => 0.0,
            AlphaProfile::Linear => 1.0,
            AlphaProfile::Cosine => -v.sin(),
            AlphaProfile::TwoSine => 2.0 * v.cos(),
            AlphaProfile::Tabulated(s) => s.derivative(v)?,
        })
    }

    /// `(∫₀ᵛ α sin τ dτ, ∫₀ᵛ α cos τ dτ)` in closed form, for the built-in
    /// profiles.
    pub fn closed_form_moments(&self, v: f64) -> Option<(f64, f64)> {
        let (s, c) = v.sin_cos();
        match self {
            AlphaProfile::Constant(k) => Some((k * (1.0 - c), k * s)),
            AlphaProfile::Linear => Some((s - v * c, v * s + c - 1.0)),
            AlphaProfile::Cosine => Some((0.5 * s * s, 0.5 * (v + s * c))),
            AlphaProfile::TwoSine => Some((v - s * c, s * s)),
            AlphaProfile::Tabulated(_) => None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self, AlphaProfile::Tabulated(_))
    }
}

impl fmt::Display for AlphaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaProfile::Constant(c) => write!(f, "const:{c}"),
            AlphaProfile::Linear => f.write_str("linear"),
            AlphaProfile::Cosine => f.write_str("cos"),
            AlphaProfile::TwoSine => f.write_str("sin2"),
            AlphaProfile::Tabulated(s) => {
                let (lo, hi) = s.domain();
                write!(f, "tabulated:{}@[{lo},{hi}]", s.knots().len())
            }
        }
    }
}
