//! C ABI over `cas-core`.
//!
//! Charts are opaque `CasChart` handles created by the `cas_*_chart`
//! constructors and released with `cas_chart_free`. Every fallible call
//! returns a `CasStatus`; on failure `cas_last_error` describes the most
//! recent error on the calling thread. Strings returned by the library are
//! released with `cas_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cas_core::diffgeo::curvature_report;
use cas_core::generators::{
    e3_case1_chart, e3_cylinder_chart, e3_plane_chart, h2r_chart, s2r_chart, worked_example, AlphaProfile, Chart,
    HyperbolicCurve, PlaneCurve, SphereCurve,
};
use cas_core::geom::Tolerances;
use cas_core::verify::{run_suite, GridSpec};
use cas_core::Error;

/// Opaque chart handle.
pub struct CasChart(Chart);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularPoint = 3,
    OutOfDomain = 4,
    Unsupported = 5,
    Degenerate = 6,
    Panic = 7,
}

/// Sampling grid; see `cas_grid_default`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: u32,
    pub nv: u32,
    pub exclusion: f64,
}

/// Curvatures and angle at a point. `k_extrinsic` and `h` are NaN outside
/// E3.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasCurvature {
    pub k_intrinsic: f64,
    pub k_extrinsic: f64,
    pub h: f64,
    pub angle: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> CasStatus {
    match e {
        Error::SingularPoint { .. } => CasStatus::SingularPoint,
        Error::OutOfDomain { .. } | Error::PoleInRange { .. } => CasStatus::OutOfDomain,
        Error::UnsupportedSpace { .. } | Error::UnsupportedChart { .. } | Error::WrongCase { .. } => {
            CasStatus::Unsupported
        }
        Error::DegeneratePoint { .. } | Error::DegenerateVector { .. } | Error::DegenerateCurve { .. } => {
            CasStatus::Degenerate
        }
        _ => CasStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and turning panics into `CasStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (CasStatus, String)>) -> CasStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CasStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CasStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CasStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CasStatus, String) {
    (CasStatus::NullPointer, format!("{what} is null"))
}

unsafe fn store(out: *mut *mut CasChart, chart: Result<Chart, Error>) -> Result<(), (CasStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let chart = chart.map_err(lib)?;
    *out = Box::into_raw(Box::new(CasChart(chart)));
    Ok(())
}

unsafe fn chart_ref<'a>(chart: *const CasChart) -> Result<&'a Chart, (CasStatus, String)> {
    chart.as_ref().map(|c| &c.0).ok_or_else(|| null("chart"))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cas_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The ruled chart for angle `theta` and profile `alpha`
/// (`const:<c>`, `linear`, `cos`, `sin2` or `csv:<path>`).
///
/// # Safety
/// `alpha` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_e3_case1_chart(theta: f64, alpha: *const c_char, out: *mut *mut CasChart) -> CasStatus {
    guard(|| {
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        let text = CStr::from_ptr(alpha)
            .to_str()
            .map_err(|_| (CasStatus::InvalidArgument, "alpha is not UTF-8".to_string()))?;
        store(out, AlphaProfile::parse(text).and_then(|a| e3_case1_chart(theta, a)))
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_e3_plane_chart(theta: f64, out: *mut *mut CasChart) -> CasStatus {
    guard(|| store(out, e3_plane_chart(theta)))
}

/// Vertical cylinder over the circle of the given radius.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_e3_cylinder_chart(radius: f64, out: *mut *mut CasChart) -> CasStatus {
    guard(|| store(out, PlaneCurve::circle(radius).and_then(e3_cylinder_chart)))
}

/// S²×R chart over the equator.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_s2r_chart(theta: f64, out: *mut *mut CasChart) -> CasStatus {
    guard(|| store(out, s2r_chart(theta, SphereCurve::Equator)))
}

/// H²×R chart over the geodesic `(sinh v, 0, cosh v)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_h2r_chart(theta: f64, out: *mut *mut CasChart) -> CasStatus {
    guard(|| store(out, h2r_chart(theta, HyperbolicCurve::Geodesic)))
}

/// Worked example `n` in 1..=4.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_worked_example(n: u32, out: *mut *mut CasChart) -> CasStatus {
    guard(|| store(out, worked_example(n)))
}

/// A copy of an E3 chart with `eps·u²` added to the height.
///
/// # Safety
/// `chart` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_perturbed(chart: *const CasChart, eps: f64, out: *mut *mut CasChart) -> CasStatus {
    guard(|| {
        let chart = chart_ref(chart)?.clone();
        store(out, chart.perturbed(eps))
    })
}

/// # Safety
/// `chart` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_free(chart: *mut CasChart) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Ambient dimension of the chart: 3 or 4.
///
/// # Safety
/// `chart` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_dim(chart: *const CasChart) -> u32 {
    chart.as_ref().map_or(0, |c| c.0.space().dim() as u32)
}

/// Position at `(u, v)` as `(x1, x2, x3, t)`; `t` is 0 in E3.
///
/// # Safety
/// `chart` must be a live handle and `out` must point to 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_eval(chart: *const CasChart, u: f64, v: f64, out: *mut f64) -> CasStatus {
    guard(|| {
        let chart = chart_ref(chart)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = chart.eval(u, v).map_err(lib)?;
        ptr::copy_nonoverlapping(p.to_array().as_ptr(), out, 4);
        Ok(())
    })
}

/// Analytic two-jet as 24 doubles: `r, r_u, r_v, r_uu, r_uv, r_vv`, each
/// `(x1, x2, x3, t)`.
///
/// # Safety
/// `chart` must be a live handle and `out` must point to 24 doubles.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_jet(chart: *const CasChart, u: f64, v: f64, out: *mut f64) -> CasStatus {
    guard(|| {
        let chart = chart_ref(chart)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let jet = chart.jet(u, v).map_err(lib)?;
        for (k, c) in jet.components().iter().enumerate() {
            ptr::copy_nonoverlapping(c.to_array().as_ptr(), out.add(4 * k), 4);
        }
        Ok(())
    })
}

/// # Safety
/// `chart` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_curvature(
    chart: *const CasChart,
    u: f64,
    v: f64,
    out: *mut CasCurvature,
) -> CasStatus {
    guard(|| {
        let chart = chart_ref(chart)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = curvature_report(chart, u, v).map_err(lib)?;
        *out = CasCurvature {
            k_intrinsic: r.k_intrinsic,
            k_extrinsic: r.k_extrinsic.unwrap_or(f64::NAN),
            h: r.h.unwrap_or(f64::NAN),
            angle: r.angle,
        };
        Ok(())
    })
}

/// The default 64×128 grid on `[0, 2] × [0, 2π]`.
#[no_mangle]
pub extern "C" fn cas_grid_default() -> CasGrid {
    let g = GridSpec::default();
    CasGrid {
        u_min: g.u_min,
        u_max: g.u_max,
        v_min: g.v_min,
        v_max: g.v_max,
        nu: g.nu as u32,
        nv: g.nv as u32,
        exclusion: g.exclusion,
    }
}

/// Runs the verification suite with default tolerances and returns the
/// JSON report in `*out_json` (free with `cas_string_free`). A null `grid`
/// selects the default grid. Returns `CAS_STATUS_OK` even when checks fail;
/// read the report's `pass` field.
///
/// # Safety
/// `chart` must be a live handle, `grid` null or valid, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn cas_chart_verify_json(
    chart: *const CasChart,
    grid: *const CasGrid,
    out_json: *mut *mut c_char,
) -> CasStatus {
    guard(|| {
        let chart = chart_ref(chart)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let grid = match grid.as_ref() {
            None => GridSpec::default(),
            Some(g) => GridSpec {
                u_min: g.u_min,
                u_max: g.u_max,
                v_min: g.v_min,
                v_max: g.v_max,
                nu: g.nu as usize,
                nv: g.nv as usize,
                exclusion: g.exclusion,
            },
        };
        grid.validate().map_err(lib)?;
        let json = run_suite(chart, &grid, &Tolerances::default()).to_json();
        *out_json = CString::new(json).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cas_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
