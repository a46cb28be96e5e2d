//! Discretisation of the flat torus [0, 2π)^n.
//!
//! Every field in this crate is sampled on a uniform grid over [0, 2π)^n,
//! n ∈ {1, 3}, with the same even number of points N on each axis. The
//! matching frequency lattice is ℤ^n ∩ [−N/2, N/2)^n, stored in the same
//! row-major order as the samples: `frequency_set[i]` is the frequency
//! carried by coefficient `i` of the discrete transform. Frequencies are
//! kept as `[i64; 3]` with unused trailing axes zero so the 1-d and 3-d
//! code paths stay identical.
//!
//! Two conventions fixed here and relied on everywhere else:
//!
//! * `cell_measure` = (2π/N)^n, so Σ over samples × cell_measure is the
//!   quadrature of ∫ dx and `cell_measure · N^n = (2π)^n` to roundoff;
//! * a lattice point with every component in {0, −N/2} is its own
//!   reflection modulo N ("self-conjugate"); real fields have real
//!   coefficients there, which constrains what odd symbols may do at
//!   those points (see `spectral`).

use crate::error::{Error, Result};

/// Period of the domain along every axis.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct PeriodicGrid {
    /// Spatial dimension, 1 or 3.
    pub n: usize,
    /// Samples per axis (even, ≥ 8).
    pub points_per_axis: usize,
    /// Volume of one grid cell, (2π/N)^n.
    pub cell_measure: f64,
    /// Frequency lattice in coefficient order (row-major over axes).
    pub frequency_set: Vec<[i64; 3]>,
}

impl PartialEq for PeriodicGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.points_per_axis == other.points_per_axis
    }
}

impl PeriodicGrid {
    pub fn new(n: usize, points_per_axis: usize) -> Result<Self> {
        if !(n == 1 || n == 3) || points_per_axis < 8 || points_per_axis % 2 != 0 {
            return Err(Error::BadGrid {
                n,
                points: points_per_axis,
            });
        }
        let len = points_per_axis.pow(n as u32);
        let half = (points_per_axis / 2) as i64;
        let np = points_per_axis as i64;
        let mut frequency_set = Vec::with_capacity(len);
        for idx in 0..len {
            let mut xi = [0i64; 3];
            let mut rem = idx;
            // Row-major: axis 0 varies slowest, axis n−1 fastest.
            for axis in (0..n).rev() {
                let i = (rem % points_per_axis) as i64;
                rem /= points_per_axis;
                xi[axis] = if i < half { i } else { i - np };
            }
            frequency_set.push(xi);
        }
        let cell = TWO_PI / points_per_axis as f64;
        Ok(PeriodicGrid {
            n,
            points_per_axis,
            cell_measure: cell.powi(n as i32),
            frequency_set,
        })
    }

    /// Total number of grid points (= number of frequencies), N^n.
    pub fn len(&self) -> usize {
        self.frequency_set.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical coordinates of the grid point with row-major index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = TWO_PI / self.points_per_axis as f64;
        let mut x = [0.0; 3];
        let mut rem = idx;
        for axis in (0..self.n).rev() {
            x[axis] = (rem % self.points_per_axis) as f64 * h;
            rem /= self.points_per_axis;
        }
        x
    }

    /// Row-major coefficient index of a lattice frequency (components are
    /// reduced modulo N, so any integer representative works).
    pub fn index_of_frequency(&self, xi: [i64; 3]) -> usize {
        let np = self.points_per_axis as i64;
        let mut idx = 0usize;
        for axis in 0..self.n {
            let wrapped = xi[axis].rem_euclid(np) as usize;
            idx = idx * self.points_per_axis + wrapped;
        }
        idx
    }

    /// Index of −ξ for the frequency at `idx`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let xi = self.frequency_set[idx];
        self.index_of_frequency([-xi[0], -xi[1], -xi[2]])
    }

    /// Whether ξ ≡ −ξ on this lattice (every component 0 or −N/2).
    pub fn is_self_conjugate(&self, xi: [i64; 3]) -> bool {
        let half = (self.points_per_axis / 2) as i64;
        (0..self.n).all(|a| xi[a] == 0 || xi[a] == -half)
    }

    /// Euclidean length |ξ| of a lattice frequency.
    pub fn frequency_norm(xi: [i64; 3]) -> f64 {
        ((xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) as f64).sqrt()
    }

    /// The representative of {ξ, −ξ} whose first nonzero component is
    /// positive. Grid-independent, which is what makes seeded random
    /// fields agree across resolutions on shared modes.
    pub fn canonical_representative(xi: [i64; 3]) -> [i64; 3] {
        for c in xi {
            if c > 0 {
                return xi;
            }
            if c < 0 {
                return [-xi[0], -xi[1], -xi[2]];
            }
        }
        xi
    }

    /// Error unless `other` is the same discretisation.
    pub fn expect_same(&self, other: &PeriodicGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                expected_n: self.n,
                expected_points: self.points_per_axis,
                got_n: other.n,
                got_points: other.points_per_axis,
            })
        }
    }
}
