use std::sync::Arc;

use serde::Serialize;

use crate::diffgeo::Jet2;
use crate::error::{Error, Result};
use crate::geom::{cross3, lorentz_cross, lorentz_dot, LorentzVec3, Space, Vec3, Vec4};

use super::alpha::AlphaProfile;
use super::closed_form::{closed_form_lambda_beta, ClosedFormData};
use super::curves::{HyperbolicCurve, PlaneCurve, SphereCurve};
use super::gamma::GammaCache;

/// Default exclusion margin around the singular edge.
pub const DEFAULT_SING_EPS: f64 = 1e-3;

/// How a Case I chart obtains `γ(v)`.
#[derive(Debug, Clone)]
pub enum GammaSource {
    ClosedForm,
    Quadrature(Arc<GammaCache>),
}

/// The ruled family `r(u,v) = (u cos θ (cos v, sin v) + γ(v), u sin θ)`.
#[derive(Debug, Clone)]
pub struct CaseOneChart {
    theta: f64,
    cos: f64,
    sin: f64,
    alpha: AlphaProfile,
    gamma: GammaSource,
    sing_eps: f64,
}

impl CaseOneChart {
    pub(crate) fn new(theta: f64, alpha: AlphaProfile, gamma: GammaSource, sing_eps: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        CaseOneChart { theta, cos, sin, alpha, gamma, sing_eps }
    }

    pub fn alpha(&self) -> &AlphaProfile {
        &self.alpha
    }

    pub fn gamma_source(&self) -> &GammaSource {
        &self.gamma
    }

    pub fn gamma(&self, v: f64) -> Result<[f64; 2]> {
        let moments = match &self.gamma {
            GammaSource::ClosedForm => self
                .alpha
                .closed_form_moments(v)
                .ok_or_else(|| Error::InvalidProfile("no closed form for a tabulated profile".into()))?,
            GammaSource::Quadrature(cache) => cache.moments(v)?,
        };
        Ok([-self.cos * moments.0, self.cos * moments.1])
    }

    /// `u + α(v)`; the chart is singular where it vanishes.
    pub fn edge(&self, u: f64, v: f64) -> Result<f64> {
        Ok(u + self.alpha.value(v)?)
    }

    fn eval(&self, u: f64, v: f64) -> Result<Vec4> {
        let g = self.gamma(v)?;
        let (sv, cv) = v.sin_cos();
        Ok(Vec4::new(u * self.cos * cv + g[0], u * self.cos * sv + g[1], u * self.sin, 0.0))
    }

    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let a = self.alpha.value(v)?;
        let w = u + a;
        if !(w.abs() >= self.sing_eps) {
            return Err(Error::SingularPoint { u, v, eps: self.sing_eps });
        }
        let da = self.alpha.derivative(v)?;
        let (sv, cv) = v.sin_cos();
        let c = self.cos;
        let radial = Vec3::new(cv, sv, 0.0);
        let tangent = Vec3::new(-sv, cv, 0.0);
        Ok(Jet2 {
            space: Space::E3,
            u,
            v,
            r: self.eval(u, v)?,
            r_u: Vec4::new(c * cv, c * sv, self.sin, 0.0),
            r_v: (tangent * (w * c)).extend(),
            r_uu: Vec4::ZERO,
            r_uv: (tangent * c).extend(),
            r_vv: ((tangent * da - radial * w) * c).extend(),
        })
    }
}

/// The inclined plane `r(u,v) = (u cos θ, v, u sin θ)`.
#[derive(Debug, Clone)]
pub struct PlaneChart {
    theta: f64,
    cos: f64,
    sin: f64,
}

impl PlaneChart {
    pub(crate) fn new(theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        // θ = 0 must give exactly (u, v, 0)
        let (sin, cos) = if theta == 0.0 { (0.0, 1.0) } else { (sin, cos) };
        PlaneChart { theta, cos, sin }
    }

    fn eval(&self, u: f64, v: f64) -> Vec4 {
        Vec4::new(u * self.cos, v, u * self.sin, 0.0)
    }

    fn jet(&self, u: f64, v: f64) -> Jet2 {
        Jet2 {
            space: Space::E3,
            u,
            v,
            r: self.eval(u, v),
            r_u: Vec4::new(self.cos, 0.0, self.sin, 0.0),
            r_v: Vec4::new(0.0, 1.0, 0.0, 0.0),
            r_uu: Vec4::ZERO,
            r_uv: Vec4::ZERO,
            r_vv: Vec4::ZERO,
        }
    }
}

/// The cylinder `r(u,v) = (γ(v), u)`.
#[derive(Debug, Clone)]
pub struct CylinderChart {
    curve: PlaneCurve,
}

impl CylinderChart {
    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let [g, d1, d2] = self.curve.jet(v)?;
        Ok(Jet2 {
            space: Space::E3,
            u,
            v,
            r: Vec4::new(g[0], g[1], u, 0.0),
            r_u: Vec4::new(0.0, 0.0, 1.0, 0.0),
            r_v: Vec4::new(d1[0], d1[1], 0.0, 0.0),
            r_uu: Vec4::ZERO,
            r_uv: Vec4::ZERO,
            r_vv: Vec4::new(d2[0], d2[1], 0.0, 0.0),
        })
    }
}

/// `(cos(u cos θ) f + sin(u cos θ) f × f', u sin θ)` in S²×R.
#[derive(Debug, Clone)]
pub struct SphereProductChart {
    theta: f64,
    cos: f64,
    sin: f64,
    curve: SphereCurve,
    sing_eps: f64,
}

impl SphereProductChart {
    pub(crate) fn new(theta: f64, curve: SphereCurve, sing_eps: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        SphereProductChart { theta, cos, sin, curve, sing_eps }
    }

    pub fn curve(&self) -> &SphereCurve {
        &self.curve
    }

    fn raw_jet(&self, u: f64, v: f64) -> Jet2 {
        let [f, f1, f2, f3] = self.curve.derivatives(v);
        let b = cross3(f, f1);
        let b1 = cross3(f, f2);
        let b2 = cross3(f1, f2) + cross3(f, f3);
        let c = self.cos;
        let (s_, c_) = (u * c).sin_cos();
        let lift = |x: Vec3| x.extend();
        Jet2 {
            space: Space::S2xR,
            u,
            v,
            r: Vec4::from_parts(f * c_ + b * s_, u * self.sin),
            r_u: Vec4::from_parts((b * c_ - f * s_) * c, self.sin),
            r_v: lift(f1 * c_ + b1 * s_),
            r_uu: lift((f * c_ + b * s_) * (-c * c)),
            r_uv: lift((b1 * c_ - f1 * s_) * c),
            r_vv: lift(f2 * c_ + b2 * s_),
        }
    }

    /// Signed speed factor: `r_v = (edge · f', 0)`.
    pub fn edge(&self, u: f64, v: f64) -> f64 {
        let [_, f1, ..] = self.curve.derivatives(v);
        self.raw_jet(u, v).r_v.head().dot(f1)
    }
}

/// `(cosh(u cos θ) f + sinh(u cos θ) f ⊠ f', u sin θ)` in H²×R.
#[derive(Debug, Clone)]
pub struct HyperbolicProductChart {
    theta: f64,
    cos: f64,
    sin: f64,
    curve: HyperbolicCurve,
    sing_eps: f64,
}

impl HyperbolicProductChart {
    pub(crate) fn new(theta: f64, curve: HyperbolicCurve, sing_eps: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        HyperbolicProductChart { theta, cos, sin, curve, sing_eps }
    }

    pub fn curve(&self) -> &HyperbolicCurve {
        &self.curve
    }

    fn raw_jet(&self, u: f64, v: f64) -> Jet2 {
        let [f, f1, f2, f3] = self.curve.derivatives(v).map(LorentzVec3::from);
        let (b, b1, b2) = match self.curve {
            // f'' = f and f''' = f', so f ⊠ f' is constant; the generic
            // products would cancel terms of size cosh² v
            HyperbolicCurve::Geodesic => {
                let zero = LorentzVec3::from(Vec3::new(0.0, 0.0, 0.0));
                (lorentz_cross(Vec3::new(0.0, 0.0, 1.0).into(), Vec3::new(1.0, 0.0, 0.0).into()), zero, zero)
            }
            _ => (lorentz_cross(f, f1), lorentz_cross(f, f2), lorentz_cross(f1, f2) + lorentz_cross(f, f3)),
        };
        let c = self.cos;
        let (s_, c_) = ((u * c).sinh(), (u * c).cosh());
        let lift = |x: LorentzVec3| Vec3::from(x).extend();
        Jet2 {
            space: Space::H2xR,
            u,
            v,
            r: Vec4::from_parts((f * c_ + b * s_).into(), u * self.sin),
            r_u: Vec4::from_parts(((f * s_ + b * c_) * c).into(), self.sin),
            r_v: lift(f1 * c_ + b1 * s_),
            r_uu: lift((f * c_ + b * s_) * (c * c)),
            r_uv: lift((f1 * s_ + b1 * c_) * c),
            r_vv: lift(f2 * c_ + b2 * s_),
        }
    }

    /// Signed speed factor: `r_v = (edge · f', 0)`.
    pub fn edge(&self, u: f64, v: f64) -> f64 {
        let [_, f1, ..] = self.curve.derivatives(v);
        lorentz_dot(self.raw_jet(u, v).r_v.head().into(), f1.into())
    }
}

/// An E³ chart with `ε u²` added to its height; a negative control that is
/// no longer a constant angle surface.
#[derive(Debug, Clone)]
pub struct PerturbedChart {
    inner: Box<Chart>,
    eps: f64,
}

impl PerturbedChart {
    pub fn inner(&self) -> &Chart {
        &self.inner
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// A parametrized surface patch with analytic two-jets.
#[derive(Debug, Clone)]
pub enum Chart {
    CaseOne(CaseOneChart),
    Plane(PlaneChart),
    Cylinder(CylinderChart),
    SphereProduct(SphereProductChart),
    HyperbolicProduct(HyperbolicProductChart),
    Perturbed(PerturbedChart),
}

/// Serializable summary of a chart.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ChartDescriptor {
    pub space: Space,
    pub kind: &'static str,
    pub theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<f64>,
}

impl Chart {
    pub(crate) fn cylinder(curve: PlaneCurve) -> Self {
        Chart::Cylinder(CylinderChart { curve })
    }

    /// Wraps an E³ chart with the `ε u²` height perturbation.
    pub fn perturbed(self, eps: f64) -> Result<Chart> {
        if self.space() != Space::E3 {
            return Err(Error::UnsupportedSpace { space: self.space().label() });
        }
        Ok(Chart::Perturbed(PerturbedChart { inner: Box::new(self), eps }))
    }

    pub fn space(&self) -> Space {
        match self {
            Chart::CaseOne(_) | Chart::Plane(_) | Chart::Cylinder(_) => Space::E3,
            Chart::SphereProduct(_) => Space::S2xR,
            Chart::HyperbolicProduct(_) => Space::H2xR,
            Chart::Perturbed(p) => p.inner.space(),
        }
    }

    /// The constant angle the chart is built for.
    pub fn theta(&self) -> f64 {
        match self {
            Chart::CaseOne(c) => c.theta,
            Chart::Plane(c) => c.theta,
            Chart::Cylinder(_) => std::f64::consts::FRAC_PI_2,
            Chart::SphereProduct(c) => c.theta,
            Chart::HyperbolicProduct(c) => c.theta,
            Chart::Perturbed(p) => p.inner.theta(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Chart::CaseOne(_) => "case1",
            Chart::Plane(_) => "plane",
            Chart::Cylinder(_) => "cylinder",
            Chart::SphereProduct(_) => "s2r",
            Chart::HyperbolicProduct(_) => "h2r",
            Chart::Perturbed(_) => "perturbed",
        }
    }

    pub fn sing_eps(&self) -> f64 {
        match self {
            Chart::CaseOne(c) => c.sing_eps,
            Chart::SphereProduct(c) => c.sing_eps,
            Chart::HyperbolicProduct(c) => c.sing_eps,
            Chart::Perturbed(p) => p.inner.sing_eps(),
            Chart::Plane(_) | Chart::Cylinder(_) => DEFAULT_SING_EPS,
        }
    }

    pub fn descriptor(&self) -> ChartDescriptor {
        let mut d = ChartDescriptor {
            space: self.space(),
            kind: self.kind(),
            theta: self.theta(),
            alpha: None,
            gamma: None,
            curve: None,
            perturb: None,
        };
        match self {
            Chart::CaseOne(c) => {
                d.alpha = Some(c.alpha.to_string());
                d.gamma = Some(match c.gamma {
                    GammaSource::ClosedForm => "closed_form",
                    GammaSource::Quadrature(_) => "quadrature",
                });
            }
            Chart::Cylinder(c) => d.curve = Some(c.curve.label()),
            Chart::SphereProduct(c) => d.curve = Some(c.curve.label()),
            Chart::HyperbolicProduct(c) => d.curve = Some(c.curve.label()),
            Chart::Perturbed(p) => {
                let inner = p.inner.descriptor();
                d = ChartDescriptor { kind: "perturbed", perturb: Some(p.eps), ..inner };
            }
            Chart::Plane(_) => {}
        }
        d
    }

    /// Position at `(u, v)`. Defined on the singular edge too; only jets
    /// refuse it.
    pub fn eval(&self, u: f64, v: f64) -> Result<Vec4> {
        match self {
            Chart::CaseOne(c) => c.eval(u, v),
            Chart::Plane(c) => Ok(c.eval(u, v)),
            Chart::Cylinder(c) => c.jet(u, v).map(|j| j.r),
            Chart::SphereProduct(c) => Ok(c.raw_jet(u, v).r),
            Chart::HyperbolicProduct(c) => Ok(c.raw_jet(u, v).r),
            Chart::Perturbed(p) => {
                let mut r = p.inner.eval(u, v)?;
                r.x3 += p.eps * u * u;
                Ok(r)
            }
        }
    }

    /// Analytic two-jet at `(u, v)`.
    pub fn jet(&self, u: f64, v: f64) -> Result<Jet2> {
        let check_edge = |edge: f64, eps: f64| {
            if edge.abs() >= eps {
                Ok(())
            } else {
                Err(Error::SingularPoint { u, v, eps })
            }
        };
        match self {
            Chart::CaseOne(c) => c.jet(u, v),
            Chart::Plane(c) => Ok(c.jet(u, v)),
            Chart::Cylinder(c) => c.jet(u, v),
            Chart::SphereProduct(c) => {
                let jet = c.raw_jet(u, v);
                check_edge(c.edge(u, v), c.sing_eps)?;
                Ok(jet)
            }
            Chart::HyperbolicProduct(c) => {
                let jet = c.raw_jet(u, v);
                check_edge(c.edge(u, v), c.sing_eps)?;
                Ok(jet)
            }
            Chart::Perturbed(p) => {
                let mut jet = p.inner.jet(u, v)?;
                jet.r.x3 += p.eps * u * u;
                jet.r_u.x3 += 2.0 * p.eps * u;
                jet.r_uu.x3 += 2.0 * p.eps;
                Ok(jet)
            }
        }
    }

    /// Signed function whose zero set is the chart's singular edge, or
    /// `None` for charts that are regular everywhere.
    pub fn edge_function(&self, u: f64, v: f64) -> Result<Option<f64>> {
        Ok(match self {
            Chart::CaseOne(c) => Some(c.edge(u, v)?),
            Chart::SphereProduct(c) => Some(c.edge(u, v)),
            Chart::HyperbolicProduct(c) => Some(c.edge(u, v)),
            Chart::Perturbed(p) => p.inner.edge_function(u, v)?,
            Chart::Plane(_) | Chart::Cylinder(_) => None,
        })
    }

    /// `+1` or `-1`, chosen so that the unit normal stays continuous across
    /// the singular edge, where `r_u × r_v` flips.
    pub fn orientation(&self, u: f64, v: f64) -> Result<f64> {
        if let Chart::Perturbed(p) = self {
            return p.inner.orientation(u, v);
        }
        let edge = match self.edge_function(u, v)? {
            Some(e) if e < 0.0 => -1.0,
            _ => 1.0,
        };
        // r_u × r_v carries a factor cos θ on the ruled family
        let ruled = match self {
            Chart::CaseOne(c) if c.theta.cos() < 0.0 => -1.0,
            _ => 1.0,
        };
        Ok(edge * ruled)
    }

    /// Whether `(u, v)` is at least `margin` away from the singular edge and
    /// inside the chart's domain.
    pub fn is_admissible(&self, u: f64, v: f64, margin: f64) -> bool {
        match self.edge_function(u, v) {
            Ok(Some(e)) => e.abs() >= margin && self.eval(u, v).is_ok(),
            Ok(None) => self.eval(u, v).is_ok(),
            Err(_) => false,
        }
    }

    /// Closed-form `λ` and `β` for the ruled family, and the `λ ≡ 0`
    /// convention for planes. `None` for other charts.
    pub fn closed_form(&self, u: f64, v: f64) -> Option<Result<ClosedFormData>> {
        match self {
            Chart::CaseOne(c) => Some(closed_form_lambda_beta(c.theta, &c.alpha, u, v, c.sing_eps)),
            Chart::Plane(_) => Some(Ok(ClosedFormData::flat(1.0))),
            _ => None,
        }
    }

    pub fn as_case_one(&self) -> Option<&CaseOneChart> {
        match self {
            Chart::CaseOne(c) => Some(c),
            _ => None,
        }
    }
}
