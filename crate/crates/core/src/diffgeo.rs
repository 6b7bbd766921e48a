//! Differential geometry on charts: finite-difference oracle jets, unit
//! normals in E³ and in the product spaces, fundamental forms, curvatures
//! and the angle with the fixed direction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Chart;
use crate::geom::{cross3, cross4, Space, Vec4};

/// Default step for the Brioschi metric stencil.
pub const BRIOSCHI_STEP: f64 = 1e-3;

/// Below this `EG − F²` counts as a degenerate point.
const MIN_AREA_ELEMENT: f64 = 1e-28;

/// Position and partial derivatives up to second order at `(u, v)`, in
/// ambient coordinates. E³ jets leave `t` at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet2 {
    pub space: Space,
    pub u: f64,
    pub v: f64,
    pub r: Vec4,
    pub r_u: Vec4,
    pub r_v: Vec4,
    pub r_uu: Vec4,
    pub r_uv: Vec4,
    pub r_vv: Vec4,
}

impl Jet2 {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `[r, r_u, r_v, r_uu, r_uv, r_vv]`.
    pub fn components(&self) -> [Vec4; 6] {
        [self.r, self.r_u, self.r_v, self.r_uu, self.r_uv, self.r_vv]
    }

    /// Largest componentwise difference to another jet.
    pub fn max_abs_diff(&self, other: &Jet2) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .flat_map(|(a, b)| (*a - b).to_array())
            .fold(0.0, |m, d| m.max(d.abs()))
    }

    /// Largest componentwise difference, each divided by
    /// `max(1, |self component|)`.
    pub fn max_scaled_diff(&self, other: &Jet2) -> f64 {
        let mut worst = 0f64;
        for (a, b) in self.components().iter().zip(other.components()) {
            for (x, y) in a.to_array().iter().zip(b.to_array()) {
                worst = worst.max((x - y).abs() / 1f64.max(x.abs()));
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

/// Base steps for [`fd_jet`], scaled by `max(1, |u|, |v|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub first: f64,
    pub second: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps { first: 1e-6, second: 1e-4 }
    }
}

impl FdSteps {
    pub fn scaled(&self, u: f64, v: f64) -> (f64, f64) {
        let scale = 1f64.max(u.abs()).max(v.abs());
        (self.first * scale, self.second * scale)
    }
}

/// Central-difference jet built only from [`Chart::eval`]; the oracle for
/// analytic jets.
pub fn fd_jet(chart: &Chart, u: f64, v: f64, steps: FdSteps) -> Result<Jet2> {
    let (h1, h2) = steps.scaled(u, v);
    let eps = chart.sing_eps();
    let at = |du: f64, dv: f64| -> Result<Vec4> {
        let (uu, vv) = (u + du, v + dv);
        if !chart.is_admissible(uu, vv, eps) {
            return Err(Error::SingularPoint { u: uu, v: vv, eps });
        }
        chart.eval(uu, vv)
    };
    let r = at(0.0, 0.0)?;
    let r_u = (at(h1, 0.0)? - at(-h1, 0.0)?) * (0.5 / h1);
    let r_v = (at(0.0, h1)? - at(0.0, -h1)?) * (0.5 / h1);
    let inv2 = 1.0 / (h2 * h2);
    let r_uu = (at(h2, 0.0)? - r * 2.0 + at(-h2, 0.0)?) * inv2;
    let r_vv = (at(0.0, h2)? - r * 2.0 + at(0.0, -h2)?) * inv2;
    let r_uv = (at(h2, h2)? - at(h2, -h2)? - at(-h2, h2)? + at(-h2, -h2)?) * (0.25 * inv2);
    Ok(Jet2 { space: chart.space(), u, v, r, r_u, r_v, r_uu, r_uv, r_vv })
}

/// Unit normal. In E³ this is `r_u × r_v` normalized; in S²×R and H²×R it
/// is the unit vector tangent to the product space and orthogonal to the
/// surface, under the ambient metric. The sign follows
/// [`Chart::orientation`], which reproduces `<N, k> = cos θ` on the
/// generated families.
pub fn normal(chart: &Chart, jet: &Jet2) -> Result<Vec4> {
    let degenerate = || Error::DegeneratePoint { u: jet.u, v: jet.v };
    let space = jet.space;
    let first = first_form(jet);
    if !(first.area_element() > MIN_AREA_ELEMENT) {
        return Err(degenerate());
    }
    let sign = chart.orientation(jet.u, jet.v)?;
    let n = match space {
        Space::E3 => cross3(jet.r_u.head(), jet.r_v.head()).extend(),
        Space::S2xR | Space::H2xR => {
            let p = Vec4::from_parts(jet.r.head(), 0.0);
            let x = cross4(p, jet.r_u, jet.r_v);
            // raise the index so the result is orthogonal under the metric
            let x = if space == Space::H2xR { Vec4::new(x.x1, x.x2, -x.x3, x.t) } else { x };
            -x
        }
    };
    let nn = space.inner(n, n);
    if !(nn > MIN_AREA_ELEMENT) {
        return Err(degenerate());
    }
    Ok(n * (sign / nn.sqrt()))
}

/// First fundamental form coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstForm {
    pub fn area_element(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

/// Second fundamental form coefficients `<r_uu, N>`, `<r_uv, N>`,
/// `<r_vv, N>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FundamentalForms {
    pub first: FirstForm,
    /// Only in E³.
    pub second: Option<SecondForm>,
}

fn first_form(jet: &Jet2) -> FirstForm {
    let ip = |a, b| jet.space.inner(a, b);
    FirstForm { e: ip(jet.r_u, jet.r_u), f: ip(jet.r_u, jet.r_v), g: ip(jet.r_v, jet.r_v) }
}

pub fn fundamental_forms(chart: &Chart, jet: &Jet2) -> Result<FundamentalForms> {
    let first = first_form(jet);
    if !(first.e > 0.0 && first.g > 0.0 && first.area_element() > MIN_AREA_ELEMENT) {
        return Err(Error::DegeneratePoint { u: jet.u, v: jet.v });
    }
    let second = match jet.space {
        Space::E3 => {
            let n = normal(chart, jet)?;
            let ip = |a: Vec4| a.head().dot(n.head());
            Some(SecondForm { e: ip(jet.r_uu), f: ip(jet.r_uv), g: ip(jet.r_vv) })
        }
        _ => None,
    };
    Ok(FundamentalForms { first, second })
}

/// Intrinsic Gaussian curvature from the metric alone, via the Brioschi
/// formula. Metric derivatives use fourth-order central differences with
/// step `h` (nodes out to `±2h`).
pub fn gauss_curvature_brioschi(chart: &Chart, u: f64, v: f64, h: f64) -> Result<f64> {
    let metric = |du: f64, dv: f64| -> Result<FirstForm> { Ok(first_form(&chart.jet(u + du, v + dv)?)) };
    let c = metric(0.0, 0.0)?;
    let (u1, u_1, u2, u_2) = (metric(h, 0.0)?, metric(-h, 0.0)?, metric(2.0 * h, 0.0)?, metric(-2.0 * h, 0.0)?);
    let (v1, v_1, v2, v_2) = (metric(0.0, h)?, metric(0.0, -h)?, metric(0.0, 2.0 * h)?, metric(0.0, -2.0 * h)?);

    let d1 = |p1: f64, m1: f64, p2: f64, m2: f64| (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
    let d2 = |p1: f64, m1: f64, p2: f64, m2: f64, c: f64| (16.0 * (p1 + m1) - (p2 + m2) - 30.0 * c) / (12.0 * h * h);

    let e_u = d1(u1.e, u_1.e, u2.e, u_2.e);
    let e_v = d1(v1.e, v_1.e, v2.e, v_2.e);
    let f_u = d1(u1.f, u_1.f, u2.f, u_2.f);
    let f_v = d1(v1.f, v_1.f, v2.f, v_2.f);
    let g_u = d1(u1.g, u_1.g, u2.g, u_2.g);
    let g_v = d1(v1.g, v_1.g, v2.g, v_2.g);
    let e_vv = d2(v1.e, v_1.e, v2.e, v_2.e, c.e);
    let g_uu = d2(u1.g, u_1.g, u2.g, u_2.g, c.g);

    // Richardson-extrapolated four-corner mixed difference
    let corners = |k: f64| -> Result<f64> {
        let s = k * h;
        Ok((metric(s, s)?.f - metric(s, -s)?.f - metric(-s, s)?.f + metric(-s, -s)?.f) / (4.0 * s * s))
    };
    let f_uv = (4.0 * corners(1.0)? - corners(2.0)?) / 3.0;

    let (e, f, g) = (c.e, c.f, c.g);
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let a = det3([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ]);
    let b = det3([[0.0, 0.5 * e_v, 0.5 * g_u], [0.5 * e_v, e, f], [0.5 * g_u, f, g]]);
    let area = c.area_element();
    if !(area > MIN_AREA_ELEMENT) {
        return Err(Error::DegeneratePoint { u, v });
    }
    Ok((a - b) / (area * area))
}

/// `(eg − f²) / (EG − F²)`; E³ only.
pub fn gauss_curvature_extrinsic(chart: &Chart, jet: &Jet2) -> Result<f64> {
    let forms = fundamental_forms(chart, jet)?;
    let second = forms.second.ok_or(Error::UnsupportedSpace { space: jet.space.label() })?;
    Ok((second.e * second.g - second.f * second.f) / forms.first.area_element())
}

/// `H = (eG − 2fF + gE) / (2(EG − F²))`; E³ only.
pub fn mean_curvature(chart: &Chart, jet: &Jet2) -> Result<f64> {
    if jet.space != Space::E3 {
        return Err(Error::UnsupportedSpace { space: jet.space.label() });
    }
    let forms = fundamental_forms(chart, jet)?;
    let (one, two) = (forms.first, forms.second.expect("E3 has a second form"));
    Ok((two.e * one.g - 2.0 * two.f * one.f + two.g * one.e) / (2.0 * one.area_element()))
}

/// Angle between the unit normal and the fixed direction `k`, in `[0, π]`.
pub fn angle_with_k(chart: &Chart, jet: &Jet2) -> Result<f64> {
    let n = normal(chart, jet)?;
    let c = jet.space.inner(n, jet.space.k());
    Ok(c.clamp(-1.0, 1.0).acos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub k_intrinsic: f64,
    /// E³ only.
    pub k_extrinsic: Option<f64>,
    /// E³ only.
    pub h: Option<f64>,
    pub angle: f64,
}

pub fn curvature_report(chart: &Chart, u: f64, v: f64) -> Result<CurvatureReport> {
    let jet = chart.jet(u, v)?;
    let (k_extrinsic, h) = match jet.space {
        Space::E3 => (Some(gauss_curvature_extrinsic(chart, &jet)?), Some(mean_curvature(chart, &jet)?)),
        _ => (None, None),
    };
    Ok(CurvatureReport {
        k_intrinsic: gauss_curvature_brioschi(chart, u, v, BRIOSCHI_STEP)?,
        k_extrinsic,
        h,
        angle: angle_with_k(chart, &jet)?,
    })
}
