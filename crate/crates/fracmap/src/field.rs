//! Real fields on the torus and their spectral views.
//!
//! [`ScalarField`] is a real sample vector on a [`PeriodicGrid`];
//! [`SpectralField`] is its DFT, with coefficients in the grid's
//! frequency order. Conversion is [`to_frequency`] / [`from_frequency`].
//! `from_frequency` refuses to fabricate a real field out of a spectrum
//! that is not conjugate-symmetric: the check is the single enforcement
//! point behind every Fourier-multiplier operation, so a mis-specified
//! symbol surfaces as [`Error::NonHermitianSymbol`] instead of a silently
//! discarded imaginary part.
//!
//! [`VectorFieldMap`] is an m-tuple of scalar fields (maps into ℝ^m, or
//! frequency-index tuples like gradients and Riesz images, which have
//! m = n). [`MatrixField`] is the pointwise-matrix analogue used for
//! projector fields and matrix-valued commutator arguments.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::PeriodicGrid;
use crate::tolerances;

#[derive(Debug, Clone)]
pub struct ScalarField {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: PeriodicGrid,
    pub coeffs: Vec<Complex64>,
}

impl ScalarField {
    /// Wraps a sample vector, checking length and finiteness.
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadGrid {
                n: grid.n,
                points: grid.points_per_axis,
            });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn zeros(grid: &PeriodicGrid) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: &PeriodicGrid, c: f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![c; grid.len()],
        }
    }

    /// Samples a function of the physical coordinates.
    pub fn from_fn(grid: &PeriodicGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: (0..grid.len()).map(|i| f(grid.point(i))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Largest absolute sample.
    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Quadrature of ∫ f g dx.
    pub fn l2_inner(&self, other: &ScalarField) -> Result<f64> {
        self.grid.expect_same(&other.grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.cell_measure)
    }

    /// Pointwise product.
    pub fn hadamard(&self, other: &ScalarField) -> Result<ScalarField> {
        self.grid.expect_same(&other.grid)?;
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn scaled(&self, c: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn to_frequency(&self) -> SpectralField {
        to_frequency(self)
    }
}

/// Forward DFT of a real field (unnormalised; see `fft`).
pub fn to_frequency(f: &ScalarField) -> SpectralField {
    let mut coeffs: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft::forward(&f.grid, &mut coeffs);
    SpectralField {
        grid: f.grid.clone(),
        coeffs,
    }
}

/// Inverse DFT back to a real field.
///
/// Fails with [`Error::NonHermitianSymbol`] when the spectrum is not
/// conjugate-symmetric to relative 1e-12 — i.e. when the data does not
/// describe any real field.
pub fn from_frequency(spec: &SpectralField) -> Result<ScalarField> {
    from_frequency_scaled(spec, 0.0)
}

/// [`from_frequency`] with an explicit magnitude anchor for the symmetry
/// check.  Operators that multiply a valid spectrum by a symmetric symbol
/// pass the scale at which the spectrum was produced (e.g. its maximum
/// before a shell projection wiped the large coefficients), so that a
/// result consisting of nothing but transform roundoff is accepted as the
/// tiny real field it is, instead of having its noise measured against
/// itself.
pub(crate) fn from_frequency_scaled(spec: &SpectralField, anchor: f64) -> Result<ScalarField> {
    let grid = &spec.grid;
    let scale: f64 = spec
        .coeffs
        .iter()
        .map(|c| c.norm())
        .fold(anchor, f64::max);
    if scale > 0.0 {
        let limit = tolerances::HERMITIAN_SYMMETRY * scale;
        for (idx, c) in spec.coeffs.iter().enumerate() {
            let conj_idx = grid.conjugate_index(idx);
            // Each unordered pair is visited twice; checking idx <= conj
            // covers self-conjugate points (imaginary part must vanish).
            if idx > conj_idx {
                continue;
            }
            let deviation = (spec.coeffs[conj_idx] - c.conj()).norm();
            if deviation > limit {
                return Err(Error::NonHermitianSymbol {
                    frequency: grid.frequency_set[idx],
                    deviation: deviation / scale,
                });
            }
        }
    }
    let mut data = spec.coeffs.clone();
    fft::inverse(grid, &mut data);
    Ok(ScalarField {
        grid: grid.clone(),
        values: data.iter().map(|c| c.re).collect(),
    })
}

impl SpectralField {
    pub fn zeros(grid: &PeriodicGrid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_frequency(&self) -> Result<ScalarField> {
        from_frequency(self)
    }

    /// Plancherel value of ‖f‖_{L²}² computed on the frequency side:
    /// (2π)^n Σ |c(ξ)/N^n|².
    pub fn l2_norm_squared(&self) -> f64 {
        let nn = self.grid.len() as f64;
        let volume = self.grid.cell_measure * nn;
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * volume / (nn * nn)
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                assert_eq!(self.grid, rhs.grid, "fields on different grids");
                ScalarField {
                    grid: self.grid.clone(),
                    values: self
                        .values
                        .iter()
                        .zip(&rhs.values)
                        .map(|(a, b)| a $op b)
                        .collect(),
                }
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);

impl std::ops::Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scaled(-1.0)
    }
}

impl std::ops::Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scaled(rhs)
    }
}

#[derive(Debug, Clone)]
pub struct VectorFieldMap {
    pub grid: PeriodicGrid,
    pub target_dim: usize,
    pub components: Vec<ScalarField>,
}

impl VectorFieldMap {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let grid = components
            .first()
            .map(|c| c.grid.clone())
            .ok_or(Error::DimensionMismatch { left: 0, right: 1 })?;
        for c in &components {
            grid.expect_same(&c.grid)?;
        }
        Ok(VectorFieldMap {
            grid,
            target_dim: components.len(),
            components,
        })
    }

    pub fn zeros(grid: &PeriodicGrid, m: usize) -> Self {
        VectorFieldMap {
            grid: grid.clone(),
            target_dim: m,
            components: (0..m).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn from_fns(grid: &PeriodicGrid, fns: &[&dyn Fn([f64; 3]) -> f64]) -> Self {
        VectorFieldMap {
            grid: grid.clone(),
            target_dim: fns.len(),
            components: fns.iter().map(|f| ScalarField::from_fn(grid, f)).collect(),
        }
    }

    /// Pointwise Euclidean inner product of two maps.
    pub fn dot(&self, other: &VectorFieldMap) -> Result<ScalarField> {
        self.expect_compatible(other)?;
        let mut out = ScalarField::zeros(&self.grid);
        for (a, b) in self.components.iter().zip(&other.components) {
            for (o, (x, y)) in out.values.iter_mut().zip(a.values.iter().zip(&b.values)) {
                *o += x * y;
            }
        }
        Ok(out)
    }

    /// Pointwise Euclidean length |u(x)|.
    pub fn magnitude(&self) -> ScalarField {
        let mut out = ScalarField::zeros(&self.grid);
        for c in &self.components {
            for (o, v) in out.values.iter_mut().zip(&c.values) {
                *o += v * v;
            }
        }
        out.map(f64::sqrt)
    }

    /// Σ_i ⟨u_i, v_i⟩_{L²}.
    pub fn l2_inner(&self, other: &VectorFieldMap) -> Result<f64> {
        self.expect_compatible(other)?;
        let mut total = 0.0;
        for (a, b) in self.components.iter().zip(&other.components) {
            total += a.l2_inner(b)?;
        }
        Ok(total)
    }

    pub fn add(&self, other: &VectorFieldMap) -> Result<VectorFieldMap> {
        self.expect_compatible(other)?;
        VectorFieldMap::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &VectorFieldMap) -> Result<VectorFieldMap> {
        self.expect_compatible(other)?;
        VectorFieldMap::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, c: f64) -> VectorFieldMap {
        VectorFieldMap {
            grid: self.grid.clone(),
            target_dim: self.target_dim,
            components: self.components.iter().map(|f| f.scaled(c)).collect(),
        }
    }

    /// Applies a fallible scalar-field operation to every component.
    pub fn map_components(
        &self,
        op: impl Fn(&ScalarField) -> Result<ScalarField>,
    ) -> Result<VectorFieldMap> {
        VectorFieldMap::new(self.components.iter().map(op).collect::<Result<_>>()?)
    }

    fn expect_compatible(&self, other: &VectorFieldMap) -> Result<()> {
        self.grid.expect_same(&other.grid)?;
        if self.target_dim != other.target_dim {
            return Err(Error::DimensionMismatch {
                left: self.target_dim,
                right: other.target_dim,
            });
        }
        Ok(())
    }
}

/// Pointwise `rows × cols` matrices of scalar fields, row-major entries.
#[derive(Debug, Clone)]
pub struct MatrixField {
    pub grid: PeriodicGrid,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ScalarField>,
}

impl MatrixField {
    pub fn new(rows: usize, cols: usize, entries: Vec<ScalarField>) -> Result<Self> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(Error::DimensionMismatch {
                left: rows * cols,
                right: entries.len(),
            });
        }
        let grid = entries[0].grid.clone();
        for e in &entries {
            grid.expect_same(&e.grid)?;
        }
        Ok(MatrixField {
            grid,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(grid: &PeriodicGrid, rows: usize, cols: usize) -> Self {
        MatrixField {
            grid: grid.clone(),
            rows,
            cols,
            entries: (0..rows * cols)
                .map(|_| ScalarField::zeros(grid))
                .collect(),
        }
    }

    pub fn identity(grid: &PeriodicGrid, m: usize) -> Self {
        let mut out = MatrixField::zeros(grid, m, m);
        for i in 0..m {
            out.entries[i * m + i] = ScalarField::constant(grid, 1.0);
        }
        out
    }

    /// u ⊗ v, the pointwise outer product of two maps.
    pub fn from_outer(u: &VectorFieldMap, v: &VectorFieldMap) -> Result<Self> {
        u.grid.expect_same(&v.grid)?;
        let mut entries = Vec::with_capacity(u.target_dim * v.target_dim);
        for a in &u.components {
            for b in &v.components {
                entries.push(a.hadamard(b)?);
            }
        }
        MatrixField::new(u.target_dim, v.target_dim, entries)
    }

    pub fn entry(&self, r: usize, c: usize) -> &ScalarField {
        &self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> MatrixField {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.entry(r, c).clone());
            }
        }
        MatrixField {
            grid: self.grid.clone(),
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Pointwise matrix-vector product.
    pub fn matvec(&self, v: &VectorFieldMap) -> Result<VectorFieldMap> {
        self.grid.expect_same(&v.grid)?;
        if self.cols != v.target_dim {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.target_dim,
            });
        }
        let mut components = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = ScalarField::zeros(&self.grid);
            for c in 0..self.cols {
                let term = self.entry(r, c).hadamard(&v.components[c])?;
                acc = &acc + &term;
            }
            components.push(acc);
        }
        VectorFieldMap::new(components)
    }

    /// Pointwise matrix-matrix product.
    pub fn matmul(&self, other: &MatrixField) -> Result<MatrixField> {
        self.grid.expect_same(&other.grid)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = ScalarField::zeros(&self.grid);
                for k in 0..self.cols {
                    let term = self.entry(r, k).hadamard(other.entry(k, c))?;
                    acc = &acc + &term;
                }
                entries.push(acc);
            }
        }
        MatrixField::new(self.rows, other.cols, entries)
    }

    pub fn add(&self, other: &MatrixField) -> Result<MatrixField> {
        self.expect_same_shape(other)?;
        MatrixField::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &MatrixField) -> Result<MatrixField> {
        self.expect_same_shape(other)?;
        MatrixField::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scaled(&self, c: f64) -> MatrixField {
        MatrixField {
            grid: self.grid.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scaled(c)).collect(),
        }
    }

    /// Pointwise Frobenius magnitude (Σ_{ij} a_{ij}²)^{1/2}.
    pub fn frobenius(&self) -> ScalarField {
        let mut out = ScalarField::zeros(&self.grid);
        for e in &self.entries {
            for (o, v) in out.values.iter_mut().zip(&e.values) {
                *o += v * v;
            }
        }
        out.map(f64::sqrt)
    }

    /// Largest pointwise Frobenius magnitude over the grid.
    pub fn linf_frobenius(&self) -> f64 {
        self.frobenius().linf()
    }

    /// Applies a fallible scalar-field operation entrywise.
    pub fn map_entries(
        &self,
        op: impl Fn(&ScalarField) -> Result<ScalarField>,
    ) -> Result<MatrixField> {
        MatrixField::new(
            self.rows,
            self.cols,
            self.entries.iter().map(op).collect::<Result<_>>()?,
        )
    }

    fn expect_same_shape(&self, other: &MatrixField) -> Result<()> {
        self.grid.expect_same(&other.grid)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

/// Stacks two maps with the same target dimension into one 2m-map.
pub fn stack(top: &VectorFieldMap, bottom: &VectorFieldMap) -> Result<VectorFieldMap> {
    top.grid.expect_same(&bottom.grid)?;
    if top.target_dim != bottom.target_dim {
        return Err(Error::DimensionMismatch {
            left: top.target_dim,
            right: bottom.target_dim,
        });
    }
    let mut components = top.components.clone();
    components.extend(bottom.components.iter().cloned());
    VectorFieldMap::new(components)
}

/// Assembles a 2×2 block matrix field from equally sized blocks
/// [[a, b], [c, d]].
pub fn block_matrix(
    a: &MatrixField,
    b: &MatrixField,
    c: &MatrixField,
    d: &MatrixField,
) -> Result<MatrixField> {
    let m = a.rows;
    for blk in [a, b, c, d] {
        a.grid.expect_same(&blk.grid)?;
        if blk.rows != m || blk.cols != m {
            return Err(Error::DimensionMismatch {
                left: m,
                right: blk.rows,
            });
        }
    }
    let mut entries = Vec::with_capacity(4 * m * m);
    for r in 0..2 * m {
        for col in 0..2 * m {
            let block = match (r < m, col < m) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            entries.push(block.entry(r % m, col % m).clone());
        }
    }
    MatrixField::new(2 * m, 2 * m, entries)
}
