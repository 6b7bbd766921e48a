//! The base curve `γ(v) = cos θ (−∫₀ᵛ α sin τ dτ, ∫₀ᵛ α cos τ dτ)`.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson2;

use super::alpha::AlphaProfile;

/// Absolute tolerance handed to adaptive Simpson.
pub const QUADRATURE_TOL: f64 = 1e-11;

/// Spacing of cached nodes for built-in profiles on the quadrature path.
const NODE_SPACING: f64 = 0.25;

/// `γ(v)`: closed form for the built-in profiles, quadrature otherwise.
pub fn gamma_integral(alpha: &AlphaProfile, theta: f64, v: f64) -> Result<[f64; 2]> {
    match alpha.closed_form_moments(v) {
        Some(m) => Ok(from_moments(theta.cos(), m)),
        None => gamma_integral_quadrature(alpha, theta, v),
    }
}

/// `γ(v)` by adaptive Simpson from 0 to `v`, for any profile.
pub fn gamma_integral_quadrature(alpha: &AlphaProfile, theta: f64, v: f64) -> Result<[f64; 2]> {
    check_anchor(alpha)?;
    if let Some((lo, hi)) = alpha.domain() {
        if !(v >= lo && v <= hi) {
            return Err(Error::OutOfDomain { v, lo, hi });
        }
    }
    let m = integrate_moments(alpha, 0.0, v);
    Ok(from_moments(theta.cos(), m))
}

#[inline]
fn from_moments(cos_theta: f64, (sin_moment, cos_moment): (f64, f64)) -> [f64; 2] {
    [-cos_theta * sin_moment, cos_theta * cos_moment]
}

fn check_anchor(alpha: &AlphaProfile) -> Result<()> {
    if let Some((lo, hi)) = alpha.domain() {
        if !(lo <= 0.0 && 0.0 <= hi) {
            return Err(Error::OutOfDomain { v: 0.0, lo, hi });
        }
    }
    Ok(())
}

/// `(∫ α sin, ∫ α cos)` over `[a, b]`; both ends must be in the domain.
fn integrate_moments(alpha: &AlphaProfile, a: f64, b: f64) -> (f64, f64) {
    adaptive_simpson2(
        |t| {
            // callers have checked the domain
            let value = alpha.value(t).unwrap_or(f64::NAN);
            let (s, c) = t.sin_cos();
            (value * s, value * c)
        },
        a,
        b,
        QUADRATURE_TOL,
    )
}

/// Moments integrated once up to a set of nodes, so that evaluating `γ`
/// densely along `v` costs one short quadrature per query.
#[derive(Debug, Clone)]
pub struct GammaCache {
    alpha: AlphaProfile,
    nodes: Vec<f64>,
    moments: Vec<(f64, f64)>,
}

impl GammaCache {
    /// Builds the cache over `[v_lo, v_hi]` (widened to include the anchor
    /// `v = 0`). For tabulated profiles the nodes are the table's knots and
    /// the range is the table's domain.
    pub fn build(alpha: &AlphaProfile, v_lo: f64, v_hi: f64) -> Result<Self> {
        check_anchor(alpha)?;
        let mut nodes = match alpha {
            AlphaProfile::Tabulated(s) => s.knots().to_vec(),
            _ => {
                let lo = v_lo.min(0.0);
                let hi = v_hi.max(0.0);
                let n = ((hi - lo) / NODE_SPACING).ceil().max(1.0) as usize;
                (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
            }
        };
        nodes.push(0.0);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let anchor = nodes.iter().position(|&x| x == 0.0).expect("anchor inserted above");

        let mut moments = vec![(0.0, 0.0); nodes.len()];
        for i in anchor + 1..nodes.len() {
            let step = integrate_moments(alpha, nodes[i - 1], nodes[i]);
            moments[i] = (moments[i - 1].0 + step.0, moments[i - 1].1 + step.1);
        }
        for i in (0..anchor).rev() {
            let step = integrate_moments(alpha, nodes[i + 1], nodes[i]);
            moments[i] = (moments[i + 1].0 + step.0, moments[i + 1].1 + step.1);
        }
        Ok(GammaCache { alpha: alpha.clone(), nodes, moments })
    }

    pub fn alpha(&self) -> &AlphaProfile {
        &self.alpha
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(∫₀ᵛ α sin, ∫₀ᵛ α cos)` from the nearest cached node.
    pub fn moments(&self, v: f64) -> Result<(f64, f64)> {
        if let Some((lo, hi)) = self.alpha.domain() {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfDomain { v, lo, hi });
            }
        }
        let k = match self.nodes.binary_search_by(|x| x.total_cmp(&v)) {
            Ok(k) => return Ok(self.moments[k]),
            Err(0) => 0,
            Err(k) if k == self.nodes.len() => k - 1,
            Err(k) => {
                if v - self.nodes[k - 1] <= self.nodes[k] - v {
                    k - 1
                } else {
                    k
                }
            }
        };
        let base = self.moments[k];
        let step = integrate_moments(&self.alpha, self.nodes[k], v);
        Ok((base.0 + step.0, base.1 + step.1))
    }

    pub fn gamma(&self, theta: f64, v: f64) -> Result<[f64; 2]> {
        Ok(from_moments(theta.cos(), self.moments(v)?))
    }
}
