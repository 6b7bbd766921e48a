//! Vector algebra for Euclidean 3- and 4-space and Lorentzian 3-space.
//!
//! The Lorentzian signature is `(+, +, -)` on `(x1, x2, x3)`, with the
//! hyperbolic plane modelled as `{<x, x> = -1, x3 > 0}`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Norms at or below this are treated as zero.
pub const DEGENERATE_NORM: f64 = 1e-14;

macro_rules! impl_linear {
    ($ty:ident { $($f:ident),+ }) => {
        impl Add for $ty {
            type Output = $ty;
            #[inline]
            fn add(self, rhs: $ty) -> $ty {
                $ty { $($f: self.$f + rhs.$f),+ }
            }
        }

        impl Sub for $ty {
            type Output = $ty;
            #[inline]
            fn sub(self, rhs: $ty) -> $ty {
                $ty { $($f: self.$f - rhs.$f),+ }
            }
        }

        impl Neg for $ty {
            type Output = $ty;
            #[inline]
            fn neg(self) -> $ty {
                $ty { $($f: -self.$f),+ }
            }
        }

        impl Mul<f64> for $ty {
            type Output = $ty;
            #[inline]
            fn mul(self, s: f64) -> $ty {
                $ty { $($f: self.$f * s),+ }
            }
        }

        impl Mul<$ty> for f64 {
            type Output = $ty;
            #[inline]
            fn mul(self, v: $ty) -> $ty {
                v * self
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub t: f64,
}

/// A vector of Lorentzian 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LorentzVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl_linear!(Vec3 { x, y, z });
impl_linear!(Vec4 { x1, x2, x3, t });
impl_linear!(LorentzVec3 { x1, x2, x3 });

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const K: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        cross3(self, o)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Embeds into 4-space with `t = 0`.
    pub fn extend(self) -> Vec4 {
        Vec4::new(self.x, self.y, self.z, 0.0)
    }
}

impl Vec4 {
    pub const ZERO: Vec4 = Vec4 { x1: 0.0, x2: 0.0, x3: 0.0, t: 0.0 };

    #[inline]
    pub const fn new(x1: f64, x2: f64, x3: f64, t: f64) -> Self {
        Vec4 { x1, x2, x3, t }
    }

    /// Combines a 3-vector with a 4th coordinate.
    #[inline]
    pub fn from_parts(p: Vec3, t: f64) -> Self {
        Vec4::new(p.x, p.y, p.z, t)
    }

    #[inline]
    pub fn dot(self, o: Vec4) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3 + self.t * o.t
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// The first three coordinates.
    #[inline]
    pub fn head(self) -> Vec3 {
        Vec3::new(self.x1, self.x2, self.x3)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.t]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Vec4::new(a[0], a[1], a[2], a[3])
    }
}

impl LorentzVec3 {
    #[inline]
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        LorentzVec3 { x1, x2, x3 }
    }

    #[inline]
    pub fn dot(self, o: LorentzVec3) -> f64 {
        lorentz_dot(self, o)
    }

    #[inline]
    pub fn cross(self, o: LorentzVec3) -> LorentzVec3 {
        lorentz_cross(self, o)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }
}

impl From<Vec3> for LorentzVec3 {
    fn from(v: Vec3) -> Self {
        LorentzVec3::new(v.x, v.y, v.z)
    }
}

impl From<LorentzVec3> for Vec3 {
    fn from(v: LorentzVec3) -> Self {
        Vec3::new(v.x1, v.x2, v.x3)
    }
}

#[inline]
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    Vec3::new(a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x)
}

#[inline]
pub fn lorentz_dot(a: LorentzVec3, b: LorentzVec3) -> f64 {
    a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3
}

/// Lorentzian cross product: the result is `lorentz_dot`-orthogonal to both
/// factors.
#[inline]
pub fn lorentz_cross(a: LorentzVec3, b: LorentzVec3) -> LorentzVec3 {
    LorentzVec3::new(a.x2 * b.x3 - a.x3 * b.x2, a.x3 * b.x1 - a.x1 * b.x3, -(a.x1 * b.x2 - a.x2 * b.x1))
}

/// Generalized cross product in R⁴: the unique `X` with
/// `X · w = det[a; b; c; w]` for every `w`.
pub fn cross4(a: Vec4, b: Vec4, c: Vec4) -> Vec4 {
    let (a, b, c) = (a.to_array(), b.to_array(), c.to_array());
    let minor = |skip: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |row: &[f64; 4], k: usize| row[cols[k]];
        m(&a, 0) * (m(&b, 1) * m(&c, 2) - m(&b, 2) * m(&c, 1)) - m(&a, 1) * (m(&b, 0) * m(&c, 2) - m(&b, 2) * m(&c, 0))
            + m(&a, 2) * (m(&b, 0) * m(&c, 1) - m(&b, 1) * m(&c, 0))
    };
    Vec4::new(-minor(0), minor(1), -minor(2), minor(3))
}

/// Vectors with a Euclidean length.
pub trait EuclideanVector: Copy + Mul<f64, Output = Self> {
    fn euclidean_norm(self) -> f64;
}

impl EuclideanVector for Vec3 {
    fn euclidean_norm(self) -> f64 {
        self.norm()
    }
}

impl EuclideanVector for Vec4 {
    fn euclidean_norm(self) -> f64 {
        self.norm()
    }
}

pub fn normalize<V: EuclideanVector>(a: V) -> Result<V> {
    let norm = a.euclidean_norm();
    if !(norm > DEGENERATE_NORM) {
        return Err(Error::DegenerateVector { norm });
    }
    Ok(a * (1.0 / norm))
}

/// The ambient space a chart immerses into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Space {
    #[serde(rename = "e3")]
    E3,
    #[serde(rename = "s2r")]
    S2xR,
    #[serde(rename = "h2r")]
    H2xR,
}

impl Space {
    pub fn label(self) -> &'static str {
        match self {
            Space::E3 => "e3",
            Space::S2xR => "s2r",
            Space::H2xR => "h2r",
        }
    }

    /// Number of ambient coordinates.
    pub fn dim(self) -> usize {
        match self {
            Space::E3 => 3,
            Space::S2xR | Space::H2xR => 4,
        }
    }

    /// Ambient inner product on coordinate vectors. E³ vectors live in the
    /// first three slots of a [`Vec4`] and ignore `t`.
    #[inline]
    pub fn inner(self, a: Vec4, b: Vec4) -> f64 {
        match self {
            Space::E3 => a.head().dot(b.head()),
            Space::S2xR => a.dot(b),
            Space::H2xR => lorentz_dot(a.head().into(), b.head().into()) + a.t * b.t,
        }
    }

    /// The fixed direction `k`.
    pub fn k(self) -> Vec4 {
        match self {
            Space::E3 => Vec4::new(0.0, 0.0, 1.0, 0.0),
            Space::S2xR | Space::H2xR => Vec4::new(0.0, 0.0, 0.0, 1.0),
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Tolerances shared by the generators, diffgeo, and verification layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Residual bound for checks built from analytic jets.
    pub analytic_tol: f64,
    /// Residual bound for checks that finite-difference something.
    pub fd_tol: f64,
    /// Residual bound for intrinsic curvature (two numerical derivatives).
    pub curvature_tol: f64,
    /// Exclusion margin around the singular edge.
    pub sing_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { analytic_tol: 1e-10, fd_tol: 1e-5, curvature_tol: 1e-4, sing_eps: 1e-3 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let all = [
            ("analytic_tol", self.analytic_tol),
            ("fd_tol", self.fd_tol),
            ("curvature_tol", self.curvature_tol),
            ("sing_eps", self.sing_eps),
        ];
        for (name, value) in all {
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("{name} must be finite and positive, got {value}"));
            }
        }
        if self.analytic_tol >= self.fd_tol {
            return Err(format!("analytic_tol ({}) must be smaller than fd_tol ({})", self.analytic_tol, self.fd_tol));
        }
        Ok(())
    }
}
