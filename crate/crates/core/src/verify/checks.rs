use crate::diffgeo::{
    fd_jet, gauss_curvature_brioschi, gauss_curvature_extrinsic, mean_curvature, normal, FdSteps, BRIOSCHI_STEP,
};
use crate::error::{Error, Result};
use crate::generators::{
    closed_form_lambda_beta, is_special_angle, validate_theta, AlphaProfile, Chart, ClosedFormData, PlaneCurve,
};
use crate::geom::{Space, Tolerances, Vec4};

use super::{evaluate, sweep, CheckResult, GridSpec};

pub const CONSTANT_ANGLE: &str = "constant_angle";
pub const STRUCTURAL: [&str; 3] = ["structural_r_uu", "structural_r_uv", "structural_r_vv"];
pub const ODE: [&str; 2] = ["ode_beta_u", "ode_lambda_u"];
pub const WEINGARTEN: [&str; 3] = ["weingarten_n_u", "weingarten_n_v", "lambda_recovery"];
pub const GAUSS_CURVATURE: &str = "gauss_curvature";
pub const GAUSS_CURVATURE_EXTRINSIC: &str = "gauss_curvature_extrinsic";
pub const MEAN_CURVATURE_FORMULA: &str = "mean_curvature_formula";
pub const CLASSIFICATION: &str = "classification";
pub const ORACLE: &str = "oracle_jet_agreement";

/// Central-difference step for derivatives of the unit normal.
pub const NORMAL_STEP: f64 = 1e-6;

/// Below this spread of `H` over the grid the mean curvature counts as
/// constant.
pub const CMC_SPREAD: f64 = 1e-9;

/// `|H|` must exceed this for a cylinder to count as non-minimal.
pub const NONZERO_H: f64 = 1e-6;

fn admit(chart: &Chart, grid: &GridSpec, u: f64, v: f64) -> Result<()> {
    if chart.is_admissible(u, v, grid.exclusion) {
        Ok(())
    } else {
        Err(Error::SingularPoint { u, v, eps: grid.exclusion })
    }
}

fn closed_form(chart: &Chart, u: f64, v: f64, check: &'static str) -> Result<ClosedFormData> {
    chart.closed_form(u, v).unwrap_or(Err(Error::UnsupportedChart { check, chart: chart.kind() }))
}

fn require_case_one(chart: &Chart, check: &'static str) -> Result<()> {
    match chart.as_case_one() {
        Some(_) => Ok(()),
        None => Err(Error::UnsupportedChart { check, chart: chart.kind() }),
    }
}

/// `max |<N, k> − cos θ|` with the declared `θ`.
pub fn check_constant_angle(chart: &Chart, grid: &GridSpec, tol: f64) -> Result<CheckResult> {
    let (space, cos) = (chart.space(), chart.theta().cos());
    let mut r = sweep(grid, [CONSTANT_ANGLE], [tol], |u, v| {
        admit(chart, grid, u, v)?;
        let jet = chart.jet(u, v)?;
        let n = normal(chart, &jet)?;
        Ok([space.inner(n, space.k()) - cos])
    })?;
    Ok(r.remove(0))
}

/// Residuals of `r_uu = 0`, `r_uv = (β_u/β) r_v` and
/// `r_vv = (β_v/β) r_v − β²λ cot θ r_u + β²λ N` with analytic jets and
/// closed-form `β`, `λ`.
pub fn check_structural_pdes(chart: &Chart, grid: &GridSpec, tol: f64) -> Result<Vec<CheckResult>> {
    require_case_one(chart, "structural_pdes")?;
    let cot = 1.0 / chart.theta().tan();
    sweep(grid, STRUCTURAL, [tol; 3], |u, v| {
        admit(chart, grid, u, v)?;
        let jet = chart.jet(u, v)?;
        let n = normal(chart, &jet)?;
        let d = closed_form(chart, u, v, "structural_pdes")?;
        let b2l = d.beta * d.beta * d.lambda;
        let r_vv = jet.r_v * (d.beta_v / d.beta) - jet.r_u * (b2l * cot) + n * b2l;
        Ok([jet.r_uu.norm(), (jet.r_uv - jet.r_v * (d.beta_u / d.beta)).norm(), (jet.r_vv - r_vv).norm()])
    })
}

/// Residual of the `r_vv` decomposition with both frame coefficients
/// negated, `(β_v/β) r_v + β²λ cot θ r_u − β²λ N`. On the ruled family this
/// equals `2 |cos θ| |u + α(v)|`, so only the sign convention used by
/// [`check_structural_pdes`] is consistent with the chart.
pub fn r_vv_residual_negated_frame(chart: &Chart, u: f64, v: f64) -> Result<f64> {
    require_case_one(chart, "structural_pdes")?;
    let cot = 1.0 / chart.theta().tan();
    let jet = chart.jet(u, v)?;
    let n = normal(chart, &jet)?;
    let d = closed_form(chart, u, v, "structural_pdes")?;
    let b2l = d.beta * d.beta * d.lambda;
    Ok((jet.r_vv - (jet.r_v * (d.beta_v / d.beta) + jet.r_u * (b2l * cot) - n * b2l)).norm())
}

/// Inputs for the two first-order ODEs in `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeFamily {
    /// `λ = tan θ / (u + α)`, `β = cos θ (u + α)`.
    ClosedForm,
    /// The `λ ≡ 0` branch with `β = 1 + α(v)²`, a function of `v` only.
    Vanishing,
    /// The closed form with `λ` shifted by a constant; a negative control.
    PerturbedLambda(f64),
}

fn scaled_difference(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Residuals of `β_u = β λ cot θ` and `λ_u = −λ² cot θ`. Each residual is
/// scaled by `max(1, |lhs|, |rhs|)` so that the cancellation between two
/// terms of size `λ²` near the singular edge does not dominate.
pub fn check_ode_residuals(
    theta: f64,
    alpha: &AlphaProfile,
    grid: &GridSpec,
    tol: f64,
    family: OdeFamily,
) -> Result<Vec<CheckResult>> {
    validate_theta(theta)?;
    if is_special_angle(theta) {
        return Err(Error::WrongCase { theta });
    }
    let cot = 1.0 / theta.tan();
    sweep(grid, ODE, [tol; 2], |u, v| {
        let d = match family {
            OdeFamily::ClosedForm => closed_form_lambda_beta(theta, alpha, u, v, grid.exclusion)?,
            OdeFamily::Vanishing => {
                let a = alpha.value(v)?;
                ClosedFormData::flat(1.0 + a * a)
            }
            OdeFamily::PerturbedLambda(shift) => {
                let d = closed_form_lambda_beta(theta, alpha, u, v, grid.exclusion)?;
                ClosedFormData { lambda: d.lambda + shift, ..d }
            }
        };
        Ok([
            scaled_difference(d.beta_u, d.beta * d.lambda * cot),
            scaled_difference(d.lambda_u, -d.lambda * d.lambda * cot),
        ])
    })
}

/// `N_u = 0` and `N_v = −λ r_v` with the unit normal differentiated by
/// central differences, plus the recovered `λ̂ = −<N_v, r_v> / <r_v, r_v>`
/// against the closed form. Applies to the ruled family and to planes.
pub fn check_weingarten(chart: &Chart, grid: &GridSpec, tol: f64) -> Result<Vec<CheckResult>> {
    if chart.closed_form(0.0, 0.0).is_none() || chart.space() != Space::E3 {
        return Err(Error::UnsupportedChart { check: "weingarten", chart: chart.kind() });
    }
    sweep(grid, WEINGARTEN, [tol; 3], |u, v| {
        admit(chart, grid, u, v)?;
        let (n_u, n_v) = normal_derivatives(chart, grid, u, v)?;
        let jet = chart.jet(u, v)?;
        let d = closed_form(chart, u, v, "weingarten")?;
        let lambda_hat = -n_v.dot(jet.r_v) / jet.r_v.dot(jet.r_v);
        Ok([n_u.norm(), (n_v + jet.r_v * d.lambda).norm(), lambda_hat - d.lambda])
    })
}

/// `(∂N/∂u, ∂N/∂v)` by central differences of the analytic normal.
pub fn normal_derivatives(chart: &Chart, grid: &GridSpec, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
    let h = NORMAL_STEP * 1f64.max(u.abs()).max(v.abs());
    let n_at = |u: f64, v: f64| -> Result<Vec4> {
        admit(chart, grid, u, v)?;
        normal(chart, &chart.jet(u, v)?)
    };
    let n_u = (n_at(u + h, v)? - n_at(u - h, v)?) * (0.5 / h);
    let n_v = (n_at(u, v + h)? - n_at(u, v - h)?) * (0.5 / h);
    Ok((n_u, n_v))
}

/// The curvature the theory predicts: flat in E³, `±cos² θ` in the product
/// spaces.
pub fn gauss_curvature_target(space: Space, theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    match space {
        Space::E3 => 0.0,
        Space::S2xR => c2,
        Space::H2xR => -c2,
    }
}

/// Intrinsic `K` against its target in every space; in E³ also the
/// extrinsic `K`, and on the ruled family `H = g / (2β²)`.
pub fn check_curvatures(chart: &Chart, grid: &GridSpec, tols: &Tolerances) -> Result<Vec<CheckResult>> {
    let target = gauss_curvature_target(chart.space(), chart.theta());
    let mut out = sweep(grid, [GAUSS_CURVATURE], [tols.curvature_tol], |u, v| {
        admit(chart, grid, u, v)?;
        Ok([gauss_curvature_brioschi(chart, u, v, BRIOSCHI_STEP)? - target])
    })?;
    if chart.space() == Space::E3 {
        out.extend(sweep(grid, [GAUSS_CURVATURE_EXTRINSIC], [tols.analytic_tol], |u, v| {
            admit(chart, grid, u, v)?;
            Ok([gauss_curvature_extrinsic(chart, &chart.jet(u, v)?)?])
        })?);
    }
    if chart.as_case_one().is_some() {
        out.extend(sweep(grid, [MEAN_CURVATURE_FORMULA], [tols.analytic_tol], |u, v| {
            admit(chart, grid, u, v)?;
            let jet = chart.jet(u, v)?;
            let n = normal(chart, &jet)?;
            let d = closed_form(chart, u, v, "curvatures")?;
            Ok([mean_curvature(chart, &jet)? - jet.r_vv.dot(n) / (2.0 * d.beta * d.beta)])
        })?);
    }
    Ok(out)
}

enum ClassKind {
    Minimal,
    ConstantNonzero,
    NonConstant,
}

fn classify(chart: &Chart) -> Option<ClassKind> {
    match chart {
        Chart::Plane(_) => Some(ClassKind::Minimal),
        Chart::Cylinder(c) => match c.curve() {
            PlaneCurve::Line => Some(ClassKind::Minimal),
            PlaneCurve::Circle { .. } => Some(ClassKind::ConstantNonzero),
            PlaneCurve::Sampled { .. } => None,
        },
        Chart::CaseOne(_) => Some(ClassKind::NonConstant),
        _ => None,
    }
}

pub fn classification_applies(chart: &Chart) -> bool {
    classify(chart).is_some()
}

/// The mean-curvature classification in E³: planes are minimal, circular
/// cylinders have constant nonzero `H`, and the ruled family is not CMC.
/// The spread thresholds are fixed, so `tol` only bounds the residual.
pub fn check_classification(chart: &Chart, grid: &GridSpec, tol: f64) -> Result<CheckResult> {
    let kind = classify(chart).ok_or(Error::UnsupportedChart { check: CLASSIFICATION, chart: chart.kind() })?;
    let samples = evaluate(grid, |u, v| {
        admit(chart, grid, u, v)?;
        mean_curvature(chart, &chart.jet(u, v)?)
    })?;
    if samples.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.2).sum::<f64>() / n;
    let spread = (samples.iter().map(|s| (s.2 - mean).powi(2)).sum::<f64>() / n).sqrt();
    let argmax = |key: &dyn Fn(f64) -> f64| {
        samples.iter().fold((0.0, [samples[0].0, samples[0].1]), |(m, p), s| {
            let k = key(s.2);
            if k > m {
                (k, [s.0, s.1])
            } else {
                (m, p)
            }
        })
    };
    let (max_residual, worst_point) = match kind {
        ClassKind::Minimal => argmax(&|h: f64| h.abs()),
        ClassKind::ConstantNonzero => {
            let (_, p) = argmax(&|h: f64| (h - mean).abs());
            let smallest = samples.iter().map(|s| s.2.abs()).fold(f64::INFINITY, f64::min);
            (if smallest > NONZERO_H && spread.is_finite() { spread } else { f64::MAX }, p)
        }
        ClassKind::NonConstant => {
            let p = [samples[0].0, samples[0].1];
            (if spread > CMC_SPREAD { 0.0 } else { f64::MAX }, p)
        }
    };
    Ok(CheckResult {
        name: CLASSIFICATION.to_string(),
        max_residual,
        tol,
        pass: max_residual <= tol,
        n_samples: samples.len(),
        worst_point,
        error: None,
    })
}

/// Largest componentwise difference between analytic and finite-difference
/// jets, relative to `max(1, |analytic component|)`.
pub fn check_oracle_agreement(chart: &Chart, grid: &GridSpec, tol: f64) -> Result<CheckResult> {
    let mut r = sweep(grid, [ORACLE], [tol], |u, v| {
        admit(chart, grid, u, v)?;
        let exact = chart.jet(u, v)?;
        let fd = fd_jet(chart, u, v, FdSteps::default())?;
        Ok([exact.max_scaled_diff(&fd)])
    })?;
    Ok(r.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::verify::run_suite;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn small() -> GridSpec {
        GridSpec { nu: 12, nv: 24, ..GridSpec::default() }
    }

    #[test]
    fn constant_angle_controls() {
        let ex1 = worked_example(1).unwrap();
        assert!(check_constant_angle(&ex1, &small(), 1e-9).unwrap().pass);
        let cyl = e3_cylinder_chart(PlaneCurve::circle(1.0).unwrap()).unwrap();
        assert!(check_constant_angle(&cyl, &small(), 1e-9).unwrap().pass);
        let bent = worked_example(1).unwrap().perturbed(0.01).unwrap();
        let r = check_constant_angle(&bent, &small(), 1e-9).unwrap();
        assert!(!r.pass && r.max_residual > 1e-3);
    }

    #[test]
    fn structural_pdes_on_examples() {
        for n in [1, 3] {
            let rs = check_structural_pdes(&worked_example(n).unwrap(), &small(), 1e-9).unwrap();
            assert_eq!(rs.len(), 3);
            assert!(rs.iter().all(|r| r.pass), "{rs:?}");
        }
        let plane = e3_plane_chart(0.3).unwrap();
        assert!(matches!(check_structural_pdes(&plane, &small(), 1e-9), Err(Error::UnsupportedChart { .. })));
    }

    #[test]
    fn beta_ratio_at_a_point() {
        let d = worked_example(2).unwrap().closed_form(1.0, 1.0).unwrap().unwrap();
        assert!((d.beta_u / d.beta - 0.5).abs() < 1e-15);
    }

    #[test]
    fn negated_frame_residual_has_closed_form() {
        let c = e3_case1_chart(2.0, AlphaProfile::Cosine).unwrap();
        for (u, v) in [(1.5f64, 0.3f64), (0.4, 2.0), (2.0, 5.5)] {
            let w = u + v.cos();
            let r = r_vv_residual_negated_frame(&c, u, v).unwrap();
            assert!((r - 2.0 * 2f64.cos().abs() * w.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn ode_families() {
        let g = small();
        let rs =
            check_ode_residuals(FRAC_PI_4, &AlphaProfile::Constant(1.0), &g, 1e-12, OdeFamily::ClosedForm).unwrap();
        assert!(rs.iter().all(|r| r.pass), "{rs:?}");
        let rs = check_ode_residuals(FRAC_PI_4, &AlphaProfile::Cosine, &g, 1e-12, OdeFamily::Vanishing).unwrap();
        assert!(rs.iter().all(|r| r.max_residual == 0.0));
        let rs =
            check_ode_residuals(FRAC_PI_4, &AlphaProfile::Constant(1.0), &g, 1e-12, OdeFamily::PerturbedLambda(0.01))
                .unwrap();
        assert!(!rs[1].pass);
        // at u = 2 the expansion 2·0.01·λ·cot θ + 1e-4·cot θ is unscaled
        let lambda = 1.0 / 3.0;
        assert!(rs[1].max_residual >= 2.0 * 0.01 * lambda + 1e-4 - 1e-12);
        assert!(matches!(
            check_ode_residuals(0.0, &AlphaProfile::Linear, &g, 1e-12, OdeFamily::ClosedForm),
            Err(Error::WrongCase { .. })
        ));
    }

    #[test]
    fn weingarten_and_lambda_recovery() {
        let ex1 = worked_example(1).unwrap();
        let rs = check_weingarten(&ex1, &small(), 1e-6).unwrap();
        assert!(rs.iter().all(|r| r.pass), "{rs:?}");
        let g = GridSpec::new((1.0, 1.5), (0.0, 0.5), 2, 2).unwrap();
        let (_, n_v) = normal_derivatives(&ex1, &g, 1.0, 0.0).unwrap();
        let r_v = ex1.jet(1.0, 0.0).unwrap().r_v;
        assert!((-n_v.dot(r_v) / r_v.dot(r_v) - 0.5).abs() < 1e-6);
        let plane = e3_plane_chart(0.7).unwrap();
        let rs = check_weingarten(&plane, &small(), 1e-12).unwrap();
        assert!(rs.iter().all(|r| r.max_residual == 0.0));
        let s = s2r_chart(0.5, SphereCurve::Equator).unwrap();
        assert!(check_weingarten(&s, &small(), 1e-6).is_err());
    }

    #[test]
    fn curvature_checks() {
        let tols = Tolerances::default();
        let rs = check_curvatures(&worked_example(2).unwrap(), &small(), &tols).unwrap();
        assert_eq!(
            rs.iter().map(|r| r.name.as_str()).collect::<Vec<_>>(),
            [GAUSS_CURVATURE, GAUSS_CURVATURE_EXTRINSIC, MEAN_CURVATURE_FORMULA]
        );
        assert!(rs.iter().all(|r| r.pass), "{rs:?}");
        let rs = check_curvatures(&s2r_chart(FRAC_PI_4, SphereCurve::Equator).unwrap(), &small(), &tols).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(rs[0].pass, "{rs:?}");
    }

    #[test]
    fn classification_cases() {
        let g = small();
        assert!(check_classification(&e3_plane_chart(PI / 5.0).unwrap(), &g, 1e-10).unwrap().pass);
        let cyl = e3_cylinder_chart(PlaneCurve::circle(1.0).unwrap()).unwrap();
        assert!(check_classification(&cyl, &g, 1e-10).unwrap().pass);
        assert!(check_classification(&worked_example(1).unwrap(), &g, 1e-10).unwrap().pass);
        let s = s2r_chart(FRAC_PI_3, SphereCurve::Equator).unwrap();
        assert!(check_classification(&s, &g, 1e-10).is_err());
    }

    #[test]
    fn classification_fails_when_the_patch_is_too_small_to_resolve_h() {
        let g = GridSpec::new((1.0, 1.0 + 1e-12), (0.0, 1e-12), 2, 2).unwrap();
        let r = check_classification(&worked_example(1).unwrap(), &g, 1e-10).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn suite_applicability() {
        let g = small();
        let tols = Tolerances::default();
        let names = |r: &crate::verify::SuiteReport| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
        let r = run_suite(&worked_example(1).unwrap(), &g, &tols);
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(r.checks.len(), 14);
        let r = run_suite(&s2r_chart(FRAC_PI_3, SphereCurve::Equator).unwrap(), &g, &tols);
        assert!(r.pass, "{}", r.to_json());
        assert_eq!(names(&r), [CONSTANT_ANGLE, GAUSS_CURVATURE, ORACLE]);
        let r = run_suite(&e3_plane_chart(0.4).unwrap(), &g, &tols);
        assert!(r.pass, "{}", r.to_json());
        let bent = worked_example(1).unwrap().perturbed(0.01).unwrap();
        let r = run_suite(&bent, &g, &tols);
        assert!(!r.pass);
        assert_eq!(r.worst().unwrap().name, CONSTANT_ANGLE);
    }

    #[test]
    fn suite_reports_errors_without_aborting() {
        let alpha = AlphaProfile::tabulated(vec![0.0, 0.1, 0.2, 0.3], vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let c = e3_case1_chart(FRAC_PI_4, alpha).unwrap();
        // every node lies outside the table
        let g = GridSpec::new((0.0, 1.0), (5.0, 6.0), 4, 4).unwrap();
        let r = run_suite(&c, &g, &Tolerances::default());
        assert!(!r.pass);
        assert!(r.checks.iter().all(|c| c.error.is_some() && !c.pass));
        assert!(r.to_json().contains("\"error\""));
    }
}
