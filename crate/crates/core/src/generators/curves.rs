//! Base curves: planar curves for cylinders, unit-speed curves on S² and on
//! the hyperboloid for the product-space immersions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{lorentz_dot, Vec3};
use crate::spline::CubicSpline;

/// Minimum speed for a planar curve to count as regular.
pub const MIN_SPEED: f64 = 1e-9;
/// Allowed deviation from unit speed / unit norm when validating samples.
pub const UNIT_TOL: f64 = 1e-9;
/// Number of samples used to validate a curve over its domain.
pub const VALIDATION_SAMPLES: usize = 257;

/// A planar curve `γ: I → R²` with two derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum PlaneCurve {
    /// Arclength-parametrized circle about the origin.
    Circle { radius: f64 },
    /// `γ(v) = (v, 0)`.
    Line,
    /// Cubic-spline interpolation of `(v, x, y)` samples.
    Sampled { x: Arc<CubicSpline>, y: Arc<CubicSpline> },
}

impl PlaneCurve {
    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidProfile(format!("circle radius must be positive, got {radius}")));
        }
        Ok(PlaneCurve::Circle { radius })
    }

    pub fn sampled(v: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let xs = CubicSpline::new(v.clone(), x)?;
        let ys = CubicSpline::new(v, y)?;
        Ok(PlaneCurve::Sampled { x: Arc::new(xs), y: Arc::new(ys) })
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            PlaneCurve::Sampled { x, .. } => Some(x.domain()),
            _ => None,
        }
    }

    /// `(γ, γ', γ'')` at `v`.
    pub fn jet(&self, v: f64) -> Result<[[f64; 2]; 3]> {
        Ok(match self {
            PlaneCurve::Circle { radius } => {
                let (s, c) = (v / radius).sin_cos();
                [[radius * c, radius * s], [-s, c], [-c / radius, -s / radius]]
            }
            PlaneCurve::Line => [[v, 0.0], [1.0, 0.0], [0.0, 0.0]],
            PlaneCurve::Sampled { x, y } => {
                let (x0, x1, x2) = x.eval(v)?;
                let (y0, y1, y2) = y.eval(v)?;
                [[x0, y0], [x1, y1], [x2, y2]]
            }
        })
    }

    /// Checks `|γ'| ≥ MIN_SPEED` on samples of `[lo, hi]` (intersected with
    /// the curve's own domain).
    pub fn validate(&self, lo: f64, hi: f64) -> Result<()> {
        let (lo, hi) = match self.domain() {
            Some((a, b)) => (lo.max(a), hi.min(b)),
            None => (lo, hi),
        };
        let mut samples = sample_points(lo, hi);
        if let PlaneCurve::Sampled { x, .. } = self {
            let knots = x.knots();
            samples.extend(knots.iter().copied());
            samples.extend(knots.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        }
        for v in samples {
            let [_, d, _] = self.jet(v)?;
            let speed = d[0].hypot(d[1]);
            if !(speed >= MIN_SPEED) {
                return Err(Error::DegenerateCurve { v, speed });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            PlaneCurve::Circle { radius } => format!("circle:{radius}"),
            PlaneCurve::Line => "line".to_string(),
            PlaneCurve::Sampled { x, .. } => {
                let (lo, hi) = x.domain();
                format!("sampled:{}@[{lo},{hi}]", x.knots().len())
            }
        }
    }
}

/// A user-supplied space curve with three derivatives: returns
/// `[f, f', f'', f''']`.
pub trait SpaceCurve: Send + Sync {
    fn derivatives(&self, v: f64) -> [Vec3; 4];
}

/// A unit-speed curve on the unit sphere.
#[derive(Clone)]
pub enum SphereCurve {
    /// `f(v) = (cos v, sin v, 0)`.
    Equator,
    /// Unit-speed circle of polar angle `polar` about the north pole.
    SmallCircle {
        polar: f64,
    },
    Custom(Arc<dyn SpaceCurve>),
}

impl SphereCurve {
    pub fn derivatives(&self, v: f64) -> [Vec3; 4] {
        match self {
            SphereCurve::Equator => circle_derivatives(1.0, 0.0, v),
            SphereCurve::SmallCircle { polar } => circle_derivatives(polar.sin(), polar.cos(), v),
            SphereCurve::Custom(c) => c.derivatives(v),
        }
    }

    pub fn validate(&self, lo: f64, hi: f64) -> Result<()> {
        if let SphereCurve::SmallCircle { polar } = self {
            if !(polar.is_finite() && *polar > 0.0 && *polar < std::f64::consts::PI) {
                return Err(Error::InvalidProfile(format!("polar angle must lie in (0, pi), got {polar}")));
            }
        }
        for v in sample_points(lo, hi) {
            let [f, df, ..] = self.derivatives(v);
            let norm = f.norm();
            if !((norm - 1.0).abs() <= UNIT_TOL) {
                return Err(Error::CurveNotOnSphere { v, norm });
            }
            let speed = df.norm();
            if !((speed - 1.0).abs() <= UNIT_TOL) {
                return Err(Error::CurveNotUnitSpeed { v, speed });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            SphereCurve::Equator => "equator".to_string(),
            SphereCurve::SmallCircle { polar } => format!("small_circle:{polar}"),
            SphereCurve::Custom(_) => "custom".to_string(),
        }
    }
}

impl fmt::Debug for SphereCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A unit-speed curve on the hyperboloid `{<x,x> = -1, x3 > 0}`.
#[derive(Clone)]
pub enum HyperbolicCurve {
    /// `f(v) = (sinh v, 0, cosh v)`.
    Geodesic,
    /// Unit-speed circle of hyperbolic radius `radius` about `(0, 0, 1)`.
    Circle {
        radius: f64,
    },
    Custom(Arc<dyn SpaceCurve>),
}

impl HyperbolicCurve {
    pub fn derivatives(&self, v: f64) -> [Vec3; 4] {
        match self {
            HyperbolicCurve::Geodesic => {
                let (s, c) = (v.sinh(), v.cosh());
                let f = Vec3::new(s, 0.0, c);
                let df = Vec3::new(c, 0.0, s);
                [f, df, f, df]
            }
            HyperbolicCurve::Circle { radius } => circle_derivatives(radius.sinh(), radius.cosh(), v),
            HyperbolicCurve::Custom(c) => c.derivatives(v),
        }
    }

    pub fn validate(&self, lo: f64, hi: f64) -> Result<()> {
        if let HyperbolicCurve::Circle { radius } = self {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(Error::InvalidProfile(format!("radius must be positive, got {radius}")));
            }
        }
        for v in sample_points(lo, hi) {
            let [f, df, ..] = self.derivatives(v);
            let value = lorentz_dot(f.into(), f.into());
            if !((value + 1.0).abs() <= UNIT_TOL * value.abs().max(1.0) && f.z > 0.0) {
                return Err(Error::CurveNotOnHyperboloid { v, value });
            }
            let sq = lorentz_dot(df.into(), df.into());
            if !((sq - 1.0).abs() <= UNIT_TOL * f.norm().powi(2).max(1.0)) {
                return Err(Error::CurveNotUnitSpeed { v, speed: sq.abs().sqrt() });
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            HyperbolicCurve::Geodesic => "geodesic".to_string(),
            HyperbolicCurve::Circle { radius } => format!("circle:{radius}"),
            HyperbolicCurve::Custom(_) => "custom".to_string(),
        }
    }
}

impl fmt::Debug for HyperbolicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Unit-speed horizontal circle of Euclidean radius `r` at height `z`.
fn circle_derivatives(r: f64, z: f64, v: f64) -> [Vec3; 4] {
    let w = 1.0 / r;
    let (s, c) = (w * v).sin_cos();
    [
        Vec3::new(r * c, r * s, z),
        Vec3::new(-s, c, 0.0),
        Vec3::new(-w * c, -w * s, 0.0),
        Vec3::new(w * w * s, -w * w * c, 0.0),
    ]
}

fn sample_points(lo: f64, hi: f64) -> Vec<f64> {
    let n = VALIDATION_SAMPLES - 1;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}
