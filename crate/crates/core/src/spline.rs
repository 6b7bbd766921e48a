//! Clamped cubic spline through tabulated samples.
//!
//! End slopes are not given with the data, so they are taken from the cubic
//! through the first (last) four samples. For data sampled from a smooth
//! function this keeps the spline third-order accurate up to the boundary.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidProfile(format!("{} abscissae but {} values", x.len(), y.len())));
        }
        if x.len() < 4 {
            return Err(Error::InvalidProfile(format!("need at least 4 samples, got {}", x.len())));
        }
        if let Some(bad) = x.iter().chain(&y).find(|c| !c.is_finite()) {
            return Err(Error::InvalidProfile(format!("non-finite sample {bad}")));
        }
        if let Some(w) = x.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile(format!(
                "abscissae must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let n = x.len();
        let d0 = end_slope(&x[..4], &y[..4], 0);
        let dn = end_slope(&x[n - 4..], &y[n - 4..], 3);
        let m = clamped_moments(&x, &y, d0, dn);
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.domain();
        t >= lo && t <= hi
    }

    /// Value, first and second derivative at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfDomain { v: t, lo, hi });
        }
        let i = match self.x.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (y0, y1, m0, m1) = (self.y[i], self.y[i + 1], self.m[i], self.m[i + 1]);
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        let curv = a * m0 + b * m1;
        Ok((value, slope, curv))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        self.eval(t).map(|e| e.0)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.eval(t).map(|e| e.1)
    }
}

/// Derivative at `xs[at]` of the cubic interpolating four points.
fn end_slope(xs: &[f64], ys: &[f64], at: usize) -> f64 {
    let t = xs[at];
    let mut slope = 0.0;
    for j in 0..4 {
        // d/dt of the Lagrange basis l_j at t
        let mut denom = 1.0;
        for k in 0..4 {
            if k != j {
                denom *= xs[j] - xs[k];
            }
        }
        let mut num = 0.0;
        for skip in 0..4 {
            if skip == j {
                continue;
            }
            num += (0..4).filter(|&k| k != j && k != skip).map(|k| t - xs[k]).product::<f64>();
        }
        slope += ys[j] * num / denom;
    }
    slope
}

/// Solves the tridiagonal system for knot second derivatives with
/// prescribed end slopes.
fn clamped_moments(x: &[f64], y: &[f64], d0: f64, dn: f64) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    diag[0] = h[0] / 3.0;
    sup[0] = h[0] / 6.0;
    rhs[0] = (y[1] - y[0]) / h[0] - d0;
    for i in 1..n - 1 {
        sub[i] = h[i - 1] / 6.0;
        diag[i] = (h[i - 1] + h[i]) / 3.0;
        sup[i] = h[i] / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    sub[n - 1] = h[n - 2] / 6.0;
    diag[n - 1] = h[n - 2] / 3.0;
    rhs[n - 1] = dn - (y[n - 1] - y[n - 2]) / h[n - 2];

    // Thomas algorithm; the system is strictly diagonally dominant.
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}
