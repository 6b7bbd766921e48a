use std::path::PathBuf;

use clap::Args;
use serde::Deserialize;

use crate::error::Error;
use crate::generators::{
    e3_chart, e3_cylinder_chart_with, e3_plane_chart, h2r_chart_with, s2r_chart_with, AlphaProfile, Chart,
    ChartOptions, HyperbolicCurve, PlaneCurve, SphereCurve,
};
use crate::geom::{Space, Tolerances};
use crate::mesh::Projection;
use crate::verify::GridSpec;

use super::CliError;

/// Run settings shared by `generate` and `verify`. Every field can come
/// from a flag or from the JSON file given by `--config`; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    /// JSON file with any of the fields below (kebab-case keys)
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Ambient space: e3, s2r or h2r
    #[arg(long)]
    pub space: Option<String>,
    /// Constant angle in radians, in [0, pi)
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Profile for the ruled family: const:<c>|linear|cos|sin2|csv:<path>
    #[arg(long)]
    pub alpha: Option<String>,
    /// E3 family: auto (by angle), plane or cylinder
    #[arg(long)]
    pub chart: Option<String>,
    /// Base curve: circle:<R>|line (E3 cylinder), equator|small:<polar> (s2r), geodesic|circle:<r> (h2r)
    #[arg(long)]
    pub curve: Option<String>,
    /// u interval as a:b
    #[arg(long, allow_hyphen_values = true)]
    pub u_range: Option<String>,
    /// v interval as a:b
    #[arg(long, allow_hyphen_values = true)]
    pub v_range: Option<String>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    /// Output path; OBJ and CSV are written next to each other
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report path (.csv for a table, JSON otherwise)
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub tol_analytic: Option<f64>,
    #[arg(long)]
    pub tol_fd: Option<f64>,
    #[arg(long)]
    pub tol_curvature: Option<f64>,
    /// Exclusion margin around the singular edge
    #[arg(long)]
    pub sing_eps: Option<f64>,
    /// 4D to 3D view: drop_t or stereo
    #[arg(long)]
    pub project: Option<String>,
    /// Adds eps*u^2 to the height (negative control)
    #[arg(long, allow_negative_numbers = true)]
    pub perturb: Option<f64>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        RunConfig { config: None, $($f: $flags.$f.or($file.$f)),* }
    };
}

impl RunConfig {
    /// Reads the `--config` file, if any, under the flags.
    pub fn merged(self) -> Result<RunConfig, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        let file: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        Ok(overlay!(
            self,
            file,
            space,
            theta,
            alpha,
            chart,
            curve,
            u_range,
            v_range,
            nu,
            nv,
            out,
            report,
            tol_analytic,
            tol_fd,
            tol_curvature,
            sing_eps,
            project,
            perturb
        ))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let space = match self.space.as_deref().unwrap_or("e3") {
            "e3" => Space::E3,
            "s2r" => Space::S2xR,
            "h2r" => Space::H2xR,
            other => return Err(CliError::config("space", format!("unknown space `{other}` (expected e3|s2r|h2r)"))),
        };

        let defaults = Tolerances::default();
        let tols = Tolerances {
            analytic_tol: self.tol_analytic.unwrap_or(defaults.analytic_tol),
            fd_tol: self.tol_fd.unwrap_or(defaults.fd_tol),
            curvature_tol: self.tol_curvature.unwrap_or(defaults.curvature_tol),
            sing_eps: self.sing_eps.unwrap_or(defaults.sing_eps),
        };
        tols.validate().map_err(|reason| CliError::config(tolerance_field(&reason), reason))?;

        let base = GridSpec::default();
        let (u_min, u_max) = match &self.u_range {
            Some(s) => parse_range(s).map_err(|r| CliError::config("u-range", r))?,
            None => (base.u_min, base.u_max),
        };
        let (v_min, v_max) = match &self.v_range {
            Some(s) => parse_range(s).map_err(|r| CliError::config("v-range", r))?,
            None => (base.v_min, base.v_max),
        };
        let grid = GridSpec {
            u_min,
            u_max,
            v_min,
            v_max,
            nu: self.nu.unwrap_or(base.nu),
            nv: self.nv.unwrap_or(base.nv),
            exclusion: tols.sing_eps,
        };
        grid.validate().map_err(|e| CliError::config(grid_field(&grid), e.to_string()))?;

        let opts = ChartOptions { sing_eps: tols.sing_eps, v_range: (v_min, v_max), ..Default::default() };
        let chart = self.build_chart(space, &opts)?;
        let chart = match self.perturb {
            Some(eps) if !eps.is_finite() => {
                return Err(CliError::config("perturb", format!("must be finite, got {eps}")))
            }
            Some(eps) => chart.perturbed(eps).map_err(|e| CliError::config("perturb", e.to_string()))?,
            None => chart,
        };

        let project = match &self.project {
            Some(s) => Projection::parse(s).ok_or_else(|| {
                CliError::config("project", format!("unknown projection `{s}` (expected drop_t|stereo)"))
            })?,
            None => Projection::default_for(space),
        };
        if project == Projection::Stereographic && space != Space::S2xR {
            return Err(CliError::config("project", "stereographic projection needs --space s2r".to_string()));
        }

        Ok(Resolved { chart, grid, tols, out: self.out.clone(), report: self.report.clone(), project })
    }

    fn theta(&self) -> Result<f64, CliError> {
        self.theta.ok_or_else(|| CliError::config("theta", "required".to_string()))
    }

    fn build_chart(&self, space: Space, opts: &ChartOptions) -> Result<Chart, CliError> {
        let theta_err = |e: Error| CliError::config("theta", e.to_string());
        let curve_err = |e: Error| CliError::config("curve", e.to_string());
        if space != Space::E3 {
            if self.alpha.is_some() {
                return Err(CliError::config("alpha", "only applies to --space e3".to_string()));
            }
            if self.chart.is_some() {
                return Err(CliError::config("chart", "only applies to --space e3".to_string()));
            }
        }
        match space {
            Space::E3 => {
                let kind = self.chart.as_deref().unwrap_or("auto");
                match kind {
                    "plane" => e3_plane_chart(self.theta()?).map_err(theta_err),
                    "cylinder" => {
                        let curve = parse_plane_curve(self.curve.as_deref().unwrap_or("circle:1"))?;
                        e3_cylinder_chart_with(curve, opts).map_err(curve_err)
                    }
                    "auto" => {
                        if self.curve.is_some() {
                            return Err(CliError::config(
                                "curve",
                                "only applies to --chart cylinder in e3".to_string(),
                            ));
                        }
                        let alpha = AlphaProfile::parse(self.alpha.as_deref().unwrap_or("const:1"))
                            .map_err(|e| CliError::config("alpha", e.to_string()))?;
                        e3_chart(self.theta()?, alpha, opts).map_err(|e| match e {
                            Error::OutOfDomain { .. } => CliError::config("alpha", e.to_string()),
                            e => theta_err(e),
                        })
                    }
                    other => Err(CliError::config(
                        "chart",
                        format!("unknown chart `{other}` (expected auto|plane|cylinder)"),
                    )),
                }
            }
            Space::S2xR => {
                let curve = match self.curve.as_deref().unwrap_or("equator") {
                    "equator" => SphereCurve::Equator,
                    s => match s.strip_prefix("small:").map(parse_number) {
                        Some(Ok(polar)) => SphereCurve::SmallCircle { polar },
                        Some(Err(r)) => return Err(CliError::config("curve", r)),
                        None => {
                            return Err(CliError::config(
                                "curve",
                                format!("unknown curve `{s}` (expected equator|small:<polar>)"),
                            ))
                        }
                    },
                };
                let theta = self.theta()?;
                crate::generators::validate_theta(theta).map_err(theta_err)?;
                s2r_chart_with(theta, curve, opts).map_err(curve_err)
            }
            Space::H2xR => {
                let curve = match self.curve.as_deref().unwrap_or("geodesic") {
                    "geodesic" => HyperbolicCurve::Geodesic,
                    s => match s.strip_prefix("circle:").map(parse_number) {
                        Some(Ok(radius)) => HyperbolicCurve::Circle { radius },
                        Some(Err(r)) => return Err(CliError::config("curve", r)),
                        None => {
                            return Err(CliError::config(
                                "curve",
                                format!("unknown curve `{s}` (expected geodesic|circle:<r>)"),
                            ))
                        }
                    },
                };
                let theta = self.theta()?;
                crate::generators::validate_theta(theta).map_err(theta_err)?;
                h2r_chart_with(theta, curve, opts).map_err(curve_err)
            }
        }
    }
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub chart: Chart,
    pub grid: GridSpec,
    pub tols: Tolerances,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub project: Projection,
}

fn parse_number(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

/// Parses `a:b` with `a < b`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("`{s}` is not of the form a:b"))?;
    let (a, b) = (parse_number(a)?, parse_number(b)?);
    if a < b {
        Ok((a, b))
    } else {
        Err(format!("empty range {a}:{b}"))
    }
}

fn parse_plane_curve(s: &str) -> Result<PlaneCurve, CliError> {
    if s == "line" {
        return Ok(PlaneCurve::Line);
    }
    match s.strip_prefix("circle:").map(parse_number) {
        Some(Ok(r)) => PlaneCurve::circle(r).map_err(|e| CliError::config("curve", e.to_string())),
        Some(Err(r)) => Err(CliError::config("curve", r)),
        None => Err(CliError::config("curve", format!("unknown curve `{s}` (expected circle:<R>|line)"))),
    }
}

fn tolerance_field(reason: &str) -> &'static str {
    for (key, field) in [
        ("analytic_tol", "tol-analytic"),
        ("fd_tol", "tol-fd"),
        ("curvature_tol", "tol-curvature"),
        ("sing_eps", "sing-eps"),
    ] {
        if reason.contains(key) {
            return field;
        }
    }
    "tol-analytic"
}

fn grid_field(g: &GridSpec) -> &'static str {
    if g.nu < 2 {
        "nu"
    } else if g.nv < 2 {
        "nv"
    } else {
        "grid"
    }
}
