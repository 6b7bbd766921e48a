use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector norm {norm:e} is below the degeneracy threshold")]
    DegenerateVector { norm: f64 },

    #[error("v = {v} lies outside the profile domain [{lo}, {hi}]")]
    OutOfDomain { v: f64, lo: f64, hi: f64 },

    #[error("theta = {theta} is a special angle; use the plane or cylinder generator")]
    WrongCase { theta: f64 },

    #[error("theta = {theta} is outside [0, pi)")]
    InvalidTheta { theta: f64 },

    #[error("({u}, {v}) is within {eps:e} of the singular edge")]
    SingularPoint { u: f64, v: f64, eps: f64 },

    #[error("curve speed {speed:e} at v = {v} is below the regularity threshold")]
    DegenerateCurve { v: f64, speed: f64 },

    #[error("curve is not unit speed at v = {v} (speed {speed})")]
    CurveNotUnitSpeed { v: f64, speed: f64 },

    #[error("curve leaves the unit sphere at v = {v} (|f| = {norm})")]
    CurveNotOnSphere { v: f64, norm: f64 },

    #[error("curve leaves the hyperboloid at v = {v} (<f,f> = {value})")]
    CurveNotOnHyperboloid { v: f64, value: f64 },

    #[error("unknown example {0}; expected 1..=4")]
    UnknownExample(u32),

    #[error("degenerate surface point at ({u}, {v})")]
    DegeneratePoint { u: f64, v: f64 },

    #[error("operation not defined in {space}")]
    UnsupportedSpace { space: &'static str },

    #[error("check `{check}` does not apply to {chart} charts")]
    UnsupportedChart { check: &'static str, chart: &'static str },

    #[error("no admissible samples on the grid")]
    EmptyGrid,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("expected a {expected}-dimensional mesh, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("stereographic projection too close to the north pole (x3 = {x3})")]
    PoleInRange { x3: f64 },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors that mean "this sample is not usable", as opposed to a broken
    /// chart. Grid sweeps skip these.
    pub fn is_inadmissible_sample(&self) -> bool {
        matches!(self, Error::SingularPoint { .. } | Error::OutOfDomain { .. } | Error::DegeneratePoint { .. })
    }
}
