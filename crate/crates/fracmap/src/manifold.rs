//! Sphere-valued maps and their pointwise geometry.
//!
//! A map u: torus → S^{m−1} ⊂ ℝ^m is stored as a vector field whose
//! pointwise norm is 1 (to a small tolerance).  The round sphere keeps
//! every geometric object closed-form: the nearest-point projection is
//! w ↦ w/|w|, the normal space at u(x) is spanned by u(x) itself, so
//!
//!   P^N(x) = u(x) u(x)^T,    P^T(x) = Id − u(x) u(x)^T,
//!
//! and the Gauss map ν(u) — in general an (m−k)-vector of the normal
//! plane — degenerates to the unit 1-vector u(x).  These formulas are
//! cross-checked against the exterior-algebra projector (built from an
//! orthonormal tangent frame at sampled points), so the matrix identities
//! used by the operator layers do not silently drift from the blade
//! calculus they stand in for.
//!
//! Two residuals quantify how faithfully a discrete map behaves like a
//! critical point:
//!
//! * [`tangency_residual`] — max |P^N ∂_k u|: the derivative of a
//!   sphere-valued map is tangent, so this measures only discretization
//!   error (the spectral derivative differentiates the trigonometric
//!   interpolant, which leaves the sphere between grid points).  It
//!   decays at roughly second order for maps with C²-type smoothness.
//! * [`wedge_residual`] — max |(−Δ)^{n/2}u ∧ ν(u)|: vanishes exactly at
//!   solutions of the Euler–Lagrange equation, since the equation says
//!   (−Δ)^{n/2}u is parallel to the normal direction.

use crate::error::{Error, Result};
use crate::field::{MatrixField, VectorFieldMap};
use crate::grassmann::{wedge, MultiVector};
use crate::grid::PeriodicGrid;
use crate::spectral::{fractional_laplacian, partial_derivative};
use crate::tolerances;

/// The round unit sphere S^{m−1} ⊂ ℝ^m.  Kept as a type so a richer
/// target (ellipsoid, torus) can slot in later; only the sphere ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereTarget {
    pub m: usize,
}

impl SphereTarget {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || m > crate::grassmann::MAX_AMBIENT_DIMENSION {
            return Err(Error::config(format!(
                "sphere ambient dimension {m} outside the supported range 2..={}",
                crate::grassmann::MAX_AMBIENT_DIMENSION
            )));
        }
        Ok(SphereTarget { m })
    }

    /// Dimension of the tangent spaces, m − 1.
    pub fn tangent_dim(&self) -> usize {
        self.m - 1
    }
}

/// A grid map with values on the target sphere.
#[derive(Debug, Clone)]
pub struct ManifoldMap {
    pub field: VectorFieldMap,
    pub target: SphereTarget,
}

impl ManifoldMap {
    /// Wrap a vector field after checking it actually lives on the
    /// sphere: max ||u(x)| − 1| must stay below the map-validity
    /// tolerance (one nearest-point projection restores a slightly
    /// drifted map to machine precision, so the tolerance is generous
    /// only by that much).
    pub fn new(field: VectorFieldMap, target: SphereTarget) -> Result<Self> {
        if field.target_dim != target.m {
            return Err(Error::DimensionMismatch {
                left: field.target_dim,
                right: target.m,
            });
        }
        let deviation = sphere_deviation(&field);
        if deviation > tolerances::SPHERE_DISTANCE {
            return Err(Error::OffManifold {
                deviation,
                limit: tolerances::SPHERE_DISTANCE,
            });
        }
        Ok(ManifoldMap { field, target })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.field.grid
    }

    /// Max ||u(x)| − 1| over the grid, a validity diagnostic.
    pub fn sphere_deviation(&self) -> f64 {
        sphere_deviation(&self.field)
    }
}

fn sphere_deviation(field: &VectorFieldMap) -> f64 {
    field
        .magnitude()
        .values
        .iter()
        .fold(0.0f64, |acc, &r| acc.max((r - 1.0).abs()))
}

/// The pointwise tangent and normal projection matrices of a sphere map.
#[derive(Debug, Clone)]
pub struct ProjectorField {
    pub tangent: MatrixField,
    pub normal: MatrixField,
}

/// Nearest-point projection onto the sphere, w ↦ w/|w|; rejects inputs
/// that pass too close to the origin for the quotient to be stable.
pub fn nearest_projection(w: &VectorFieldMap) -> Result<ManifoldMap> {
    let target = SphereTarget::new(w.target_dim)?;
    let magnitude = w.magnitude();
    let mut smallest = f64::INFINITY;
    for &r in &magnitude.values {
        smallest = smallest.min(r);
    }
    if smallest < tolerances::NEAR_ZERO_VECTOR {
        return Err(Error::NearZeroVector {
            magnitude: smallest,
            limit: tolerances::NEAR_ZERO_VECTOR,
        });
    }
    let inverse = magnitude.map(|r| 1.0 / r);
    let components = w
        .components
        .iter()
        .map(|c| c.hadamard(&inverse))
        .collect::<Result<Vec<_>>>()?;
    ManifoldMap::new(VectorFieldMap::new(components)?, target)
}

/// P^N = u u^T and P^T = Id − u u^T as pointwise matrix fields.
pub fn projector_fields(u: &ManifoldMap) -> Result<ProjectorField> {
    let normal = MatrixField::from_outer(&u.field, &u.field)?;
    let tangent = MatrixField::identity(u.grid(), u.target.m).sub(&normal)?;
    Ok(ProjectorField { tangent, normal })
}

/// The Gauss map of a sphere map: the oriented unit normal at u(x),
/// which for S^{m−1} is the 1-vector u(x) itself.
pub fn gauss_map(u: &ManifoldMap) -> VectorFieldMap {
    u.field.clone()
}

/// Max over grid points and derivative directions of |P^N(x) ∂_k u(x)|.
/// The continuum quantity vanishes identically (derivatives of a
/// sphere-valued map are tangent), so what remains measures the
/// interpolant's excursion off the sphere.
pub fn tangency_residual(u: &ManifoldMap) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for axis in 0..u.grid().n {
        let mut alpha = [0usize; 3];
        alpha[axis] = 1;
        let derivative = u.field.map_components(|c| partial_derivative(c, alpha))?;
        // P^N v = u (u·v): one inner product per point instead of a
        // matrix application.
        let along = u.field.dot(&derivative)?;
        for &a in &along.values {
            worst = worst.max(a.abs());
        }
    }
    Ok(worst)
}

/// Max over grid points of |(−Δ)^{n/2}u(x) ∧ ν(u)(x)| (multivector
/// norm).  Zero exactly at critical points: the Euler–Lagrange equation
/// says the fractional Laplacian of u points along the normal.
pub fn wedge_residual(u: &ManifoldMap) -> Result<f64> {
    let n = u.grid().n as f64;
    let lap = u
        .field
        .map_components(|c| fractional_laplacian(c, n / 2.0))?;
    let m = u.target.m;
    let len = u.grid().len();
    let mut worst: f64 = 0.0;
    for idx in 0..len {
        let at = |f: &VectorFieldMap| -> Vec<f64> {
            f.components.iter().map(|c| c.values[idx]).collect()
        };
        let lhs = MultiVector::from_vector(&at(&lap))?;
        let nu = MultiVector::from_vector(&at(&u.field))?;
        worst = worst.max(wedge(&lhs, &nu)?.norm());
        let _ = m;
    }
    Ok(worst)
}
