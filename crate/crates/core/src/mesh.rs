//! Grid meshes sampled from charts, with OBJ and CSV writers and 4D to 3D
//! projections for the product spaces.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::diffgeo::{angle_with_k, gauss_curvature_brioschi, mean_curvature, BRIOSCHI_STEP};
use crate::error::{Error, Result};
use crate::generators::Chart;
use crate::geom::{Space, Vec4};
use crate::verify::{GridSpec, SuiteReport};

/// x3 above this is too close to the north pole to project.
pub const POLE_MARGIN: f64 = 1e-6;

/// Vertices on a `(u, v)` grid in grid order, quads between admissible
/// neighbours, and per-vertex scalars where they are defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub space: Space,
    /// 3, or 4 for unprojected product-space meshes.
    pub dim: usize,
    pub nu: usize,
    pub nv: usize,
    pub uv: Vec<[f64; 2]>,
    /// Ambient coordinates; `t` is zero when `dim == 3`.
    pub vertices: Vec<Vec4>,
    /// Zero-based corner indices, counterclockwise in `(u, v)`.
    pub faces: Vec<[usize; 4]>,
    pub angle: Vec<Option<f64>>,
    pub k: Vec<Option<f64>>,
    /// E³ only.
    pub h: Vec<Option<f64>>,
}

struct Sample {
    r: Vec4,
    admissible: bool,
    edge_sign: Option<bool>,
    angle: Option<f64>,
    k: Option<f64>,
    h: Option<f64>,
}

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(x) if x.is_finite() => Ok(Some(x)),
        Ok(_) => Ok(None),
        Err(e) if e.is_inadmissible_sample() => Ok(None),
        Err(e) => Err(e),
    }
}

fn sample(chart: &Chart, grid: &GridSpec, u: f64, v: f64) -> Result<Sample> {
    let r = chart.eval(u, v)?;
    if !r.is_finite() {
        return Err(Error::DegeneratePoint { u, v });
    }
    let admissible = chart.is_admissible(u, v, grid.exclusion);
    let edge_sign = chart.edge_function(u, v)?.map(|e| e > 0.0);
    let (mut angle, mut k, mut h) = (None, None, None);
    if admissible {
        match chart.jet(u, v) {
            Ok(jet) => {
                angle = optional(angle_with_k(chart, &jet))?;
                k = optional(gauss_curvature_brioschi(chart, u, v, BRIOSCHI_STEP))?;
                if chart.space() == Space::E3 {
                    h = optional(mean_curvature(chart, &jet))?;
                }
            }
            Err(e) if e.is_inadmissible_sample() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Sample { r, admissible, edge_sign, angle, k, h })
}

/// Samples `chart` on `grid`. A quad is emitted only when its four corners
/// are admissible and lie on the same side of the singular edge, so no face
/// crosses the excluded band. Fails with `EmptyGrid` when no node is
/// admissible.
pub fn sample_grid(chart: &Chart, grid: &GridSpec) -> Result<Mesh> {
    grid.validate()?;
    let nodes = grid.nodes();
    let samples: Vec<Result<Sample>> = nodes.par_iter().map(|&(u, v)| sample(chart, grid, u, v)).collect();
    let samples = samples.into_iter().collect::<Result<Vec<_>>>()?;
    if !samples.iter().any(|s| s.admissible) {
        return Err(Error::EmptyGrid);
    }

    let (nu, nv) = (grid.nu, grid.nv);
    let idx = |i: usize, j: usize| i * nv + j;
    let mut faces = Vec::new();
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let quad = [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)];
            let ok = quad.iter().all(|&q| samples[q].admissible)
                && quad.iter().all(|&q| samples[q].edge_sign == samples[quad[0]].edge_sign);
            if ok {
                faces.push(quad);
            }
        }
    }
    let space = chart.space();
    Ok(Mesh {
        space,
        dim: space.dim(),
        nu,
        nv,
        uv: nodes.iter().map(|&(u, v)| [u, v]).collect(),
        vertices: samples.iter().map(|s| s.r).collect(),
        faces,
        angle: samples.iter().map(|s| s.angle).collect(),
        k: samples.iter().map(|s| s.k).collect(),
        h: samples.iter().map(|s| s.h).collect(),
    })
}

/// How a product-space point is brought into R³.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `(x1, x2, x3)`.
    DropT,
    /// The S² part projected from the north pole, with `t` as the third
    /// coordinate. S²×R only.
    Stereographic,
}

impl Projection {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "drop_t" => Some(Projection::DropT),
            "stereo" | "stereographic" => Some(Projection::Stereographic),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Projection::DropT => "drop_t",
            Projection::Stereographic => "stereo",
        }
    }

    /// The natural view: stereographic for S²×R, `drop_t` otherwise.
    pub fn default_for(space: Space) -> Self {
        match space {
            Space::S2xR => Projection::Stereographic,
            _ => Projection::DropT,
        }
    }
}

pub fn project_point(p: Vec4, space: Space, mode: Projection) -> Result<Vec4> {
    match mode {
        Projection::DropT => Ok(Vec4::new(p.x1, p.x2, p.x3, 0.0)),
        Projection::Stereographic => {
            if space != Space::S2xR {
                return Err(Error::UnsupportedSpace { space: space.label() });
            }
            if p.x3 > 1.0 - POLE_MARGIN {
                return Err(Error::PoleInRange { x3: p.x3 });
            }
            let s = 1.0 / (1.0 - p.x3);
            Ok(Vec4::new(p.x1 * s, p.x2 * s, p.t, 0.0))
        }
    }
}

/// Projects a 4D mesh to 3D, keeping faces and scalars.
pub fn project4d(mesh: &Mesh, mode: Projection) -> Result<Mesh> {
    if mesh.dim != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: mesh.dim });
    }
    let vertices = mesh.vertices.iter().map(|&p| project_point(p, mesh.space, mode)).collect::<Result<Vec<_>>>()?;
    Ok(Mesh { dim: 3, vertices, ..mesh.clone() })
}

/// Shortest round-trip decimal form (at most 17 significant digits), with
/// an exponent outside `[1e-5, 1e16)` and `-0` written as `0`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-5..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn format_optional(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// ASCII OBJ text: `v x y z` lines, then 1-indexed `f a b c d` quads.
pub fn obj_string(mesh: &Mesh) -> Result<String> {
    if mesh.dim != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: mesh.dim });
    }
    let mut out = String::new();
    for p in &mesh.vertices {
        writeln!(out, "v {} {} {}", format_float(p.x1), format_float(p.x2), format_float(p.x3)).unwrap();
    }
    for f in &mesh.faces {
        writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1).unwrap();
    }
    Ok(out)
}

pub fn write_obj(mesh: &Mesh, path: &Path) -> Result<()> {
    write_atomic(path, obj_string(mesh)?.as_bytes())
}

fn csv_bytes(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let wrap = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Per-vertex table with header `u,v,x1,x2,x3[,t],angle,K[,H]`; `t` for
/// 4D meshes, `H` for E³ meshes. Undefined scalars are empty cells.
pub fn mesh_csv(mesh: &Mesh) -> Result<Vec<u8>> {
    let with_t = mesh.dim == 4;
    let with_h = mesh.space == Space::E3;
    let mut header = vec!["u", "v", "x1", "x2", "x3"];
    if with_t {
        header.push("t");
    }
    header.extend(["angle", "K"]);
    if with_h {
        header.push("H");
    }
    let rows = (0..mesh.vertices.len()).map(|i| {
        let p = mesh.vertices[i];
        let mut row =
            vec![mesh.uv[i][0], mesh.uv[i][1], p.x1, p.x2, p.x3].into_iter().map(format_float).collect::<Vec<_>>();
        if with_t {
            row.push(format_float(p.t));
        }
        row.push(format_optional(mesh.angle[i]));
        row.push(format_optional(mesh.k[i]));
        if with_h {
            row.push(format_optional(mesh.h[i]));
        }
        row
    });
    csv_bytes(Path::new("<mesh>"), &header, rows)
}

pub fn write_csv(mesh: &Mesh, path: &Path) -> Result<()> {
    write_atomic(path, &mesh_csv(mesh)?)
}

/// One row per check: `name,max_residual,tol,pass,n_samples,worst_u,worst_v,error`.
pub fn report_csv(report: &SuiteReport) -> Result<Vec<u8>> {
    let header = ["name", "max_residual", "tol", "pass", "n_samples", "worst_u", "worst_v", "error"];
    let rows = report.checks.iter().map(|c| {
        vec![
            c.name.clone(),
            format_float(c.max_residual),
            format_float(c.tol),
            c.pass.to_string(),
            c.n_samples.to_string(),
            format_float(c.worst_point[0]),
            format_float(c.worst_point[1]),
            c.error.clone().unwrap_or_default(),
        ]
    });
    csv_bytes(Path::new("<report>"), &header, rows)
}

pub fn write_report_csv(report: &SuiteReport, path: &Path) -> Result<()> {
    write_atomic(path, &report_csv(report)?)
}
