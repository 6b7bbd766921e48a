//! Numerical verification: every identity of the constant angle theory as a
//! named residual over a sampling grid, aggregated into a JSON report.

mod checks;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Chart, ChartDescriptor};
use crate::geom::Tolerances;

pub use checks::*;

/// A rectangular `(u, v)` sampling grid. Node `(i, j)` sits at
/// `u_min + i·Δu`, `v_min + j·Δv`; nodes are ordered with `i` (over `u`) as
/// the outer index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub nu: usize,
    pub nv: usize,
    /// Margin around the singular edge; nodes inside it are skipped.
    pub exclusion: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            u_min: 0.0,
            u_max: 2.0,
            v_min: 0.0,
            v_max: 2.0 * std::f64::consts::PI,
            nu: 64,
            nv: 128,
            exclusion: 1e-3,
        }
    }
}

impl GridSpec {
    pub fn new(u: (f64, f64), v: (f64, f64), nu: usize, nv: usize) -> Result<Self> {
        let grid = GridSpec { u_min: u.0, u_max: u.1, v_min: v.0, v_max: v.1, nu, nv, ..Default::default() };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_exclusion(self, exclusion: f64) -> Result<Self> {
        let grid = GridSpec { exclusion, ..self };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        let finite = [self.u_min, self.u_max, self.v_min, self.v_max].iter().all(|x| x.is_finite());
        if !finite {
            return bad("ranges must be finite".into());
        }
        if !(self.u_min < self.u_max) {
            return bad(format!("u range {}:{} is empty", self.u_min, self.u_max));
        }
        if !(self.v_min < self.v_max) {
            return bad(format!("v range {}:{} is empty", self.v_min, self.v_max));
        }
        if self.nu < 2 || self.nv < 2 {
            return bad(format!("need at least 2 nodes per direction, got {}x{}", self.nu, self.nv));
        }
        if !(self.exclusion.is_finite() && self.exclusion > 0.0) {
            return bad(format!("exclusion must be positive, got {}", self.exclusion));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u_at(&self, i: usize) -> f64 {
        if i + 1 == self.nu {
            return self.u_max;
        }
        self.u_min + (self.u_max - self.u_min) * i as f64 / (self.nu - 1) as f64
    }

    pub fn v_at(&self, j: usize) -> f64 {
        if j + 1 == self.nv {
            return self.v_max;
        }
        self.v_min + (self.v_max - self.v_min) * j as f64 / (self.nv - 1) as f64
    }

    /// All nodes in grid order.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        (0..self.nu).flat_map(|i| (0..self.nv).map(move |j| (self.u_at(i), self.v_at(j)))).collect()
    }
}

/// Outcome of one named residual check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub n_samples: usize,
    pub worst_point: [f64; 2],
    /// Set when the check could not run; the check then fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn errored(name: &str, tol: f64, grid: &GridSpec, err: &Error) -> Self {
        CheckResult {
            name: name.to_string(),
            max_residual: f64::MAX,
            tol,
            pass: false,
            n_samples: 0,
            worst_point: [grid.u_min, grid.v_min],
            error: Some(err.to_string()),
        }
    }

    /// `max_residual / tol`, the severity used to rank checks.
    pub fn severity(&self) -> f64 {
        self.max_residual / self.tol
    }
}

/// The chart, grid, and tolerances a suite ran with.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteChart {
    #[serde(flatten)]
    pub descriptor: ChartDescriptor,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub chart: SuiteChart,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl SuiteReport {
    /// The most severe failing check, or the most severe check overall when
    /// everything passes.
    pub fn worst(&self) -> Option<&CheckResult> {
        fn most_severe<'a>(it: impl Iterator<Item = &'a CheckResult>) -> Option<&'a CheckResult> {
            it.fold(None, |best: Option<&CheckResult>, c| match best {
                Some(b) if b.severity() >= c.severity() => Some(b),
                _ => Some(c),
            })
        }
        most_severe(self.checks.iter().filter(|c| !c.pass)).or_else(|| most_severe(self.checks.iter()))
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn clean(r: f64) -> f64 {
    if r.is_finite() {
        r.abs()
    } else {
        f64::MAX
    }
}

/// Evaluates `f` at every grid node in parallel and reduces each of the `N`
/// residual channels to its maximum. Nodes where `f` reports an
/// inadmissible sample are skipped; any other error aborts the sweep.
pub(crate) fn sweep<const N: usize, F>(
    grid: &GridSpec,
    names: [&str; N],
    tols: [f64; N],
    f: F,
) -> Result<Vec<CheckResult>>
where
    F: Fn(f64, f64) -> Result<[f64; N]> + Sync,
{
    let samples = evaluate(grid, f)?;
    if samples.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok((0..N)
        .map(|k| {
            let (mut max, mut worst) = (0.0, [samples[0].0, samples[0].1]);
            for (u, v, r) in &samples {
                let r = clean(r[k]);
                if r > max {
                    max = r;
                    worst = [*u, *v];
                }
            }
            CheckResult {
                name: names[k].to_string(),
                max_residual: max,
                tol: tols[k],
                pass: max <= tols[k],
                n_samples: samples.len(),
                worst_point: worst,
                error: None,
            }
        })
        .collect())
}

/// Values of `f` at the admissible grid nodes, in grid order.
pub(crate) fn evaluate<T, F>(grid: &GridSpec, f: F) -> Result<Vec<(f64, f64, T)>>
where
    T: Send,
    F: Fn(f64, f64) -> Result<T> + Sync,
{
    grid.validate()?;
    let raw: Vec<Result<Option<(f64, f64, T)>>> = grid
        .nodes()
        .into_par_iter()
        .map(|(u, v)| match f(u, v) {
            Ok(t) => Ok(Some((u, v, t))),
            Err(e) if e.is_inadmissible_sample() => Ok(None),
            Err(e) => Err(e),
        })
        .collect();
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        if let Some(s) = r? {
            out.push(s);
        }
    }
    Ok(out)
}

fn push_all(out: &mut Vec<CheckResult>, names: &[&str], tol: f64, grid: &GridSpec, r: Result<Vec<CheckResult>>) {
    match r {
        Ok(rs) => out.extend(rs),
        Err(e) => out.extend(names.iter().map(|n| CheckResult::errored(n, tol, grid, &e))),
    }
}

/// Runs every check that applies to `chart`, plus the oracle agreement of
/// analytic and finite-difference jets. Errors inside a check become failed
/// results carrying the message; the suite itself never aborts.
pub fn run_suite(chart: &Chart, grid: &GridSpec, tols: &Tolerances) -> SuiteReport {
    let mut checks = Vec::new();
    let one = |r: Result<CheckResult>| r.map(|c| vec![c]);

    push_all(
        &mut checks,
        &[CONSTANT_ANGLE],
        tols.analytic_tol,
        grid,
        one(check_constant_angle(chart, grid, tols.analytic_tol)),
    );

    if let Some(case_one) = chart.as_case_one() {
        push_all(
            &mut checks,
            &STRUCTURAL,
            tols.analytic_tol,
            grid,
            check_structural_pdes(chart, grid, tols.analytic_tol),
        );
        push_all(
            &mut checks,
            &ODE,
            tols.analytic_tol,
            grid,
            check_ode_residuals(chart.theta(), case_one.alpha(), grid, tols.analytic_tol, OdeFamily::ClosedForm),
        );
    }
    if chart.closed_form(0.0, 0.0).is_some() {
        push_all(&mut checks, &WEINGARTEN, tols.fd_tol, grid, check_weingarten(chart, grid, tols.fd_tol));
    }

    match check_curvatures(chart, grid, tols) {
        Ok(rs) => checks.extend(rs),
        Err(e) => checks.push(CheckResult::errored(GAUSS_CURVATURE, tols.curvature_tol, grid, &e)),
    }

    if classification_applies(chart) {
        push_all(
            &mut checks,
            &[CLASSIFICATION],
            tols.analytic_tol,
            grid,
            one(check_classification(chart, grid, tols.analytic_tol)),
        );
    }

    push_all(&mut checks, &[ORACLE], tols.fd_tol, grid, one(check_oracle_agreement(chart, grid, tols.fd_tol)));

    let pass = checks.iter().all(|c| c.pass);
    SuiteReport { chart: SuiteChart { descriptor: chart.descriptor(), grid: *grid, tolerances: *tols }, checks, pass }
}
