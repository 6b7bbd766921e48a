use serde::Serialize;

use crate::error::{Error, Result};

use super::alpha::AlphaProfile;

/// Closed-form `λ` (principal curvature along `e₂`) and `β = |r_v|`, with
/// their partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormData {
    pub lambda: f64,
    pub beta: f64,
    /// `φ(v)` in `β = φ(v)(u + α(v))`; `None` on the `λ ≡ 0` branch.
    pub phi: Option<f64>,
    pub lambda_u: f64,
    pub beta_u: f64,
    pub beta_v: f64,
}

impl ClosedFormData {
    /// The `λ ≡ 0`, `β = β(v)` branch with a locally constant `β`.
    pub fn flat(beta: f64) -> Self {
        ClosedFormData { lambda: 0.0, beta, phi: None, lambda_u: 0.0, beta_u: 0.0, beta_v: 0.0 }
    }
}

/// `λ = tan θ / (u + α(v))` and `β = cos θ (u + α(v))`, the normalization
/// `φ ≡ cos θ` that makes `β = |r_v|` on the ruled chart.
pub fn closed_form_lambda_beta(
    theta: f64,
    alpha: &AlphaProfile,
    u: f64,
    v: f64,
    sing_eps: f64,
) -> Result<ClosedFormData> {
    let w = u + alpha.value(v)?;
    if !(w.abs() >= sing_eps) {
        return Err(Error::SingularPoint { u, v, eps: sing_eps });
    }
    let (sin, cos) = theta.sin_cos();
    let tan = sin / cos;
    Ok(ClosedFormData {
        lambda: tan / w,
        beta: cos * w,
        phi: Some(cos),
        lambda_u: -tan / (w * w),
        beta_u: cos,
        beta_v: cos * alpha.derivative(v)?,
    })
}
