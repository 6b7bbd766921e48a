//! Exact charts for every constant angle surface family.
//!
//! In E³: the ruled family built from a profile `α(v)`, inclined planes,
//! horizontal planes (`θ = 0`) and vertical cylinders (`θ = π/2`). In the
//! product spaces S²×R and H²×R: the immersions built from a unit-speed base
//! curve.

mod alpha;
mod chart;
mod closed_form;
mod curves;
mod gamma;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

pub use alpha::AlphaProfile;
pub use chart::{
    CaseOneChart, Chart, ChartDescriptor, CylinderChart, GammaSource, HyperbolicProductChart, PerturbedChart,
    PlaneChart, SphereProductChart, DEFAULT_SING_EPS,
};
pub use closed_form::{closed_form_lambda_beta, ClosedFormData};
pub use curves::{HyperbolicCurve, PlaneCurve, SpaceCurve, SphereCurve, MIN_SPEED, UNIT_TOL};
pub use gamma::{gamma_integral, gamma_integral_quadrature, GammaCache, QUADRATURE_TOL};

use crate::error::{Error, Result};

/// Angles this close to `π/2` are treated as the cylinder case.
const SPECIAL_ANGLE_TOL: f64 = 1e-12;

/// Which route computes `γ(v)` for built-in profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaPath {
    /// Closed form where one exists, cached quadrature otherwise.
    #[default]
    Auto,
    /// Always cached quadrature.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartOptions {
    pub sing_eps: f64,
    /// Parameter interval over which curves are validated and `γ` is cached.
    pub v_range: (f64, f64),
    pub gamma: GammaPath,
}

impl Default for ChartOptions {
    fn default() -> Self {
        ChartOptions { sing_eps: DEFAULT_SING_EPS, v_range: (0.0, 2.0 * PI), gamma: GammaPath::Auto }
    }
}

pub fn validate_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && (0.0..PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::InvalidTheta { theta })
    }
}

/// `θ = 0` or `θ = π/2`, where the ruled family degenerates.
pub fn is_special_angle(theta: f64) -> bool {
    theta == 0.0 || (theta - FRAC_PI_2).abs() <= SPECIAL_ANGLE_TOL
}

/// The ruled family for `θ ∈ (0, π) \ {π/2}`.
pub fn e3_case1_chart(theta: f64, alpha: AlphaProfile) -> Result<Chart> {
    e3_case1_chart_with(theta, alpha, &ChartOptions::default())
}

pub fn e3_case1_chart_with(theta: f64, alpha: AlphaProfile, opts: &ChartOptions) -> Result<Chart> {
    validate_theta(theta)?;
    if is_special_angle(theta) {
        return Err(Error::WrongCase { theta });
    }
    let gamma = if alpha.is_tabulated() || opts.gamma == GammaPath::Quadrature {
        GammaSource::Quadrature(Arc::new(GammaCache::build(&alpha, opts.v_range.0, opts.v_range.1)?))
    } else {
        GammaSource::ClosedForm
    };
    Ok(Chart::CaseOne(CaseOneChart::new(theta, alpha, gamma, opts.sing_eps)))
}

/// The plane `x sin θ − z cos θ = 0`, after rotating away the `(x, y)`
/// angle and with the arclength choice `α(v) = v`.
pub fn e3_plane_chart(theta: f64) -> Result<Chart> {
    validate_theta(theta)?;
    Ok(Chart::Plane(PlaneChart::new(theta)))
}

pub fn e3_cylinder_chart(gamma: PlaneCurve) -> Result<Chart> {
    e3_cylinder_chart_with(gamma, &ChartOptions::default())
}

pub fn e3_cylinder_chart_with(gamma: PlaneCurve, opts: &ChartOptions) -> Result<Chart> {
    gamma.validate(opts.v_range.0, opts.v_range.1)?;
    Ok(Chart::cylinder(gamma))
}

/// Picks the family by angle: `θ = 0` gives the horizontal plane,
/// `θ = π/2` the cylinder over the unit circle, anything else the ruled
/// chart for `alpha`.
pub fn e3_chart(theta: f64, alpha: AlphaProfile, opts: &ChartOptions) -> Result<Chart> {
    validate_theta(theta)?;
    if theta == 0.0 {
        e3_plane_chart(0.0)
    } else if is_special_angle(theta) {
        e3_cylinder_chart_with(PlaneCurve::Circle { radius: 1.0 }, opts)
    } else {
        e3_case1_chart_with(theta, alpha, opts)
    }
}

pub fn s2r_chart(theta: f64, f: SphereCurve) -> Result<Chart> {
    s2r_chart_with(theta, f, &ChartOptions::default())
}

pub fn s2r_chart_with(theta: f64, f: SphereCurve, opts: &ChartOptions) -> Result<Chart> {
    validate_theta(theta)?;
    f.validate(opts.v_range.0, opts.v_range.1)?;
    Ok(Chart::SphereProduct(SphereProductChart::new(theta, f, opts.sing_eps)))
}

pub fn h2r_chart(theta: f64, f: HyperbolicCurve) -> Result<Chart> {
    h2r_chart_with(theta, f, &ChartOptions::default())
}

pub fn h2r_chart_with(theta: f64, f: HyperbolicCurve, opts: &ChartOptions) -> Result<Chart> {
    validate_theta(theta)?;
    f.validate(opts.v_range.0, opts.v_range.1)?;
    Ok(Chart::HyperbolicProduct(HyperbolicProductChart::new(theta, f, opts.sing_eps)))
}

/// The profile used by worked example `n` (all at `θ = π/4`).
pub fn example_profile(n: u32) -> Result<AlphaProfile> {
    match n {
        1 => Ok(AlphaProfile::Constant(1.0)),
        2 => Ok(AlphaProfile::Linear),
        3 => Ok(AlphaProfile::Cosine),
        4 => Ok(AlphaProfile::TwoSine),
        _ => Err(Error::UnknownExample(n)),
    }
}

/// Worked examples 1–4: `θ = π/4` with `α = 1, v, cos v, 2 sin v`.
pub fn worked_example(n: u32) -> Result<Chart> {
    e3_case1_chart(FRAC_PI_4, example_profile(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{lorentz_dot, Vec4};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, SQRT_2};

    fn close(a: Vec4, b: Vec4, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn e3(x: f64, y: f64, z: f64) -> Vec4 {
        Vec4::new(x, y, z, 0.0)
    }

    #[test]
    fn example_one_points() {
        let c = e3_case1_chart(FRAC_PI_4, AlphaProfile::Constant(1.0)).unwrap();
        assert!(close(c.eval(0.0, 0.0).unwrap(), Vec4::ZERO, 1e-15));
        assert!(close(c.eval(1.0, 0.0).unwrap(), e3(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2), 1e-15));
        let ex1 = worked_example(1).unwrap();
        assert!(close(ex1.eval(0.0, PI).unwrap(), e3(-2.0 * FRAC_1_SQRT_2, 0.0, 0.0), 1e-15));
    }

    #[test]
    fn printed_example_formulas() {
        let s = FRAC_1_SQRT_2;
        let printed: [fn(f64, f64) -> [f64; 3]; 4] = [
            |u, v| [(1.0 + u) * v.cos() - 1.0, (1.0 + u) * v.sin(), u],
            |u, v| [(u + v) * v.cos() - v.sin(), (u + v) * v.sin() + v.cos() - 1.0, u],
            |u, v| [u * v.cos() - v.sin().powi(2) / 2.0, u * v.sin() + (v + v.sin() * v.cos()) / 2.0, u],
            |u, v| [u * v.cos() - v + v.cos() * v.sin(), u * v.sin() + v.sin().powi(2), u],
        ];
        for (n, formula) in (1..=4).zip(printed) {
            let chart = worked_example(n).unwrap();
            for (u, v) in [(0.0, 0.0), (0.5, 1.0), (2.0, 4.0), (1.3, 6.2)] {
                let p = formula(u, v);
                let want = e3(s * p[0], s * p[1], s * p[2]);
                assert!(close(chart.eval(u, v).unwrap(), want, 1e-14), "example {n} at ({u},{v})");
            }
        }
        let ex2 = worked_example(2).unwrap();
        let want = e3(-s, s * (FRAC_PI_2 - 1.0), 0.0);
        assert!(close(ex2.eval(0.0, FRAC_PI_2).unwrap(), want, 1e-15));
        let ex3 = worked_example(3).unwrap();
        assert!(close(ex3.eval(0.0, FRAC_PI_2).unwrap(), e3(-0.5 * s, FRAC_PI_4 * s, 0.0), 1e-15));
        let ex4 = worked_example(4).unwrap();
        assert!(close(ex4.eval(0.0, PI).unwrap(), e3(-PI * s, 0.0, 0.0), 1e-15));
        assert!(matches!(worked_example(5), Err(Error::UnknownExample(5))));
        assert!(matches!(worked_example(0), Err(Error::UnknownExample(0))));
    }

    #[test]
    fn special_angles_are_redirected() {
        assert!(matches!(e3_case1_chart(0.0, AlphaProfile::Linear), Err(Error::WrongCase { .. })));
        assert!(matches!(e3_case1_chart(FRAC_PI_2, AlphaProfile::Linear), Err(Error::WrongCase { .. })));
        assert!(matches!(e3_case1_chart(3.5, AlphaProfile::Linear), Err(Error::InvalidTheta { .. })));
        assert!(matches!(e3_case1_chart(PI, AlphaProfile::Linear), Err(Error::InvalidTheta { .. })));
        let opts = ChartOptions::default();
        assert_eq!(e3_chart(0.0, AlphaProfile::Linear, &opts).unwrap().kind(), "plane");
        assert_eq!(e3_chart(FRAC_PI_2, AlphaProfile::Linear, &opts).unwrap().kind(), "cylinder");
        assert_eq!(e3_chart(1.0, AlphaProfile::Linear, &opts).unwrap().kind(), "case1");
    }

    #[test]
    fn plane_points() {
        let p = e3_plane_chart(FRAC_PI_4).unwrap();
        assert!(close(p.eval(SQRT_2, 3.0).unwrap(), e3(1.0, 3.0, 1.0), 1e-15));
        let flat = e3_plane_chart(0.0).unwrap();
        assert_eq!(flat.eval(1.25, -3.5).unwrap(), e3(1.25, -3.5, 0.0));
        for theta in [0.0, 0.3, FRAC_PI_2, 2.5] {
            let p = e3_plane_chart(theta).unwrap();
            for (u, v) in [(0.0, 1.0), (2.0, -1.0), (-3.0, 7.0)] {
                let r = p.eval(u, v).unwrap();
                assert!((r.x1 * theta.sin() - r.x3 * theta.cos()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn cylinder_points() {
        let c = e3_cylinder_chart(PlaneCurve::circle(1.0).unwrap()).unwrap();
        assert!(close(c.eval(2.0, 0.0).unwrap(), e3(1.0, 0.0, 2.0), 1e-15));
        let v: Vec<f64> = (0..8).map(f64::from).collect();
        let stalled = PlaneCurve::sampled(v, vec![0.0; 8], vec![0.0; 8]).unwrap();
        let opts = ChartOptions { v_range: (0.0, 7.0), ..ChartOptions::default() };
        assert!(matches!(e3_cylinder_chart_with(stalled, &opts), Err(Error::DegenerateCurve { .. })));
    }

    #[test]
    fn sphere_product_points() {
        let c = s2r_chart(FRAC_PI_3, SphereCurve::Equator).unwrap();
        for v in [0.0, 1.0, 3.0] {
            let r = c.eval(0.0, v).unwrap();
            assert!(close(r, Vec4::new(v.cos(), v.sin(), 0.0, 0.0), 1e-15));
        }
        let u0 = 0.9;
        let r = c.eval(u0, 0.0).unwrap();
        let want = Vec4::new((u0 / 2.0).cos(), 0.0, (u0 / 2.0).sin(), u0 * 3f64.sqrt() / 2.0);
        assert!(close(r, want, 1e-15));
        for (u, v) in [(0.3, 0.1), (1.7, 2.0), (-1.0, 5.0)] {
            assert!((c.eval(u, v).unwrap().head().norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn hyperbolic_product_points() {
        let c = h2r_chart(FRAC_PI_3, HyperbolicCurve::Geodesic).unwrap();
        for v in [0.0, 0.5, -1.5] {
            let r = c.eval(0.0, v).unwrap();
            assert!(close(r, Vec4::new(v.sinh(), 0.0, v.cosh(), 0.0), 1e-14));
        }
        let u0 = 1.3;
        let r = c.eval(u0, 0.0).unwrap();
        let want = Vec4::new(0.0, (u0 / 2.0).sinh(), (u0 / 2.0).cosh(), u0 * 3f64.sqrt() / 2.0);
        assert!(close(r, want, 1e-15));
        for (u, v) in [(0.3, 0.1), (1.7, 2.0), (-1.0, 1.0)] {
            let h = c.eval(u, v).unwrap().head();
            assert!((lorentz_dot(h.into(), h.into()) + 1.0).abs() < 1e-9);
            assert!(h.z > 0.0);
        }
    }

    #[test]
    fn case_one_jet_identities() {
        for (theta, alpha) in
            [(FRAC_PI_4, AlphaProfile::Constant(1.0)), (0.4, AlphaProfile::Cosine), (2.2, AlphaProfile::TwoSine)]
        {
            let chart = e3_case1_chart(theta, alpha.clone()).unwrap();
            for (u, v) in [(0.5, 0.3), (1.9, 2.5), (1.2, 5.0)] {
                let j = chart.jet(u, v).unwrap();
                let cf = closed_form_lambda_beta(theta, &alpha, u, v, 1e-3).unwrap();
                assert!((j.r_u.norm() - 1.0).abs() < 1e-12);
                assert!(j.r_u.dot(j.r_v).abs() < 1e-12);
                assert!((j.r_v.norm() - cf.beta.abs()).abs() < 1e-12);
                assert_eq!(j.r_uu, Vec4::ZERO);
            }
        }
    }

    #[test]
    fn jets_refuse_the_singular_edge() {
        let c = worked_example(1).unwrap();
        assert!(matches!(c.jet(-1.0, 0.0), Err(Error::SingularPoint { .. })));
        assert!(c.eval(-1.0, 0.0).is_ok());
        assert!(!c.is_admissible(-1.0005, 0.0, 1e-3));
        assert!(c.is_admissible(-1.0015, 0.0, 1e-3));
        assert_eq!(c.orientation(-2.0, 0.0).unwrap(), -1.0);
        assert_eq!(c.orientation(0.0, 0.0).unwrap(), 1.0);

        let s = s2r_chart(FRAC_PI_3, SphereCurve::Equator).unwrap();
        // cos(u/2) vanishes at u = π
        assert!(matches!(s.jet(PI, 0.0), Err(Error::SingularPoint { .. })));
        assert_eq!(s.orientation(4.0, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn perturbation_only_in_e3() {
        let p = worked_example(1).unwrap().perturbed(0.01).unwrap();
        let r = p.eval(2.0, 0.0).unwrap();
        let r0 = worked_example(1).unwrap().eval(2.0, 0.0).unwrap();
        assert!((r.x3 - r0.x3 - 0.04).abs() < 1e-15);
        let s = s2r_chart(1.0, SphereCurve::Equator).unwrap();
        assert!(matches!(s.perturbed(0.01), Err(Error::UnsupportedSpace { .. })));
    }

    #[test]
    fn quadrature_path_tracks_closed_form() {
        let opts = ChartOptions { gamma: GammaPath::Quadrature, ..ChartOptions::default() };
        for n in 1..=4 {
            let alpha = example_profile(n).unwrap();
            let exact = e3_case1_chart(FRAC_PI_4, alpha.clone()).unwrap();
            let quad = e3_case1_chart_with(FRAC_PI_4, alpha, &opts).unwrap();
            for k in 0..=64 {
                let v = 2.0 * PI * k as f64 / 64.0;
                let d = exact.eval(0.7, v).unwrap() - quad.eval(0.7, v).unwrap();
                assert!(d.norm() < 1e-9);
            }
        }
    }
}
